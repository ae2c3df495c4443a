"""End-to-end graphlet transform: raw kernels followed by net conversion."""

from __future__ import annotations

import numpy as np

from .conversion import net_from_raw, sub_matrix
from .dictionary import Dictionary, family_closure
from .errors import ConversionInconsistencyError
from .fields import NetFrequencyField, RawFrequencyField
from .graph import SparseAdjacency
from .kernels import TransformStats, _Timer, raw_frequencies


def graphlet_transform(
    g: SparseAdjacency,
    dictionary: Dictionary | None = None,
    threads=None,
    lenient: bool = False,
    stats: TransformStats | None = None,
    trace_memory: bool = False,
    complete_family: bool = False,
) -> tuple[RawFrequencyField, NetFrequencyField]:
    """Raw and net frequency fields of ``g`` over ``dictionary`` (default: all 16).

    By default the net field of a sub-dictionary uses only its own block of
    U16, so a graphlet whose supergraphs are left out keeps their copies.
    With ``complete_family`` the missing supergraphs are computed as well and
    dropped after conversion; every net column is then an induced count.
    """
    d = dictionary or Dictionary.full()
    work = family_closure(d) if complete_family else d
    raw = raw_frequencies(g, work, threads=threads, stats=stats, trace_memory=trace_memory)
    with _Timer(stats, "convert"):
        net = net_from_raw(raw, sub_matrix(work), lenient=lenient)
    if work != d:
        keep = [work.index(k) for k in d.selected]
        raw = RawFrequencyField(raw.values[:, keep], d)
        net = NetFrequencyField(net.values[:, keep], d)
    bad = np.argwhere(net.values > raw.values)
    if len(bad):
        v, a = (int(x) for x in bad[0])
        raise ConversionInconsistencyError(v, d.selected[a], int(net.values[v, a]))
    return raw, net
