"""
Density operators over a truncated polarized Fock space.

A FockOperator stores only the non-zero matrix elements of rho as a map
(ket occupations, bra occupations) -> amplitude. Devices act on creation
operators: every device is a linear map a_in^dagger -> sum_j U_j a_j^dagger
over a closed set of modes, so photon number is conserved and the basis
never leaves the photon cap.

Usage:
    from src.oracle.fock import (
        DetectionPattern, apply_beam_splitter, build_pair_source, postselect_probability,
    )

    state = build_pair_source(stats, "a", "c", cap=6)
    state = apply_beam_splitter(tensor(state, other), "c", "f")
    p = postselect_probability(state, DetectionPattern.from_labels({"c_H": 1, "c_V": 1}, 0.9))
"""

import math
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType

from src.core.constants import AMPLITUDE_FLOOR, OPERATOR_TOLERANCE, POLARIZATIONS
from src.core.exceptions import CapExceeded, InvalidParameter, UnknownMode
from src.devices.channel_detector import pnr_weight
from src.models.sources import PhotonStatistics

Occupation = tuple[int, ...]
EntryKey = tuple[Occupation, Occupation]

_INV_SQRT2 = 1 / math.sqrt(2)


# =============================================================================
# Value Types
# =============================================================================


@dataclass(frozen=True, order=True)
class ModeIndex:
    """One polarized optical mode."""

    label: str
    polarization: str

    def __post_init__(self) -> None:
        if self.polarization not in POLARIZATIONS:
            raise InvalidParameter(f"polarization must be H or V, got {self.polarization!r}")

    def __str__(self) -> str:
        return f"{self.label}_{self.polarization}"

    @classmethod
    def parse(cls, name: str) -> "ModeIndex":
        """Build from the 'label_P' notation, e.g. 'c_H'."""
        label, sep, pol = name.rpartition("_")
        if not sep or not label:
            raise InvalidParameter(f"mode name must look like 'label_H', got {name!r}")
        return cls(label, pol)


def modes_for(labels: Iterable[str]) -> tuple[ModeIndex, ...]:
    """H and V modes for each label, in order."""
    return tuple(ModeIndex(label, pol) for label in labels for pol in POLARIZATIONS)


@dataclass(frozen=True)
class FockOperator:
    """
    Sparse operator on the Fock space of an ordered mode register.

    Entries are never mutated after construction; every device returns a new
    operator.
    """

    modes: tuple[ModeIndex, ...]
    entries: Mapping[EntryKey, complex]
    photon_cap: int
    _index: Mapping[ModeIndex, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index = {mode: i for i, mode in enumerate(self.modes)}
        if len(index) != len(self.modes):
            raise InvalidParameter("mode register contains duplicate (label, polarization) pairs")
        width = len(self.modes)
        for ket, bra in self.entries:
            if len(ket) != width or len(bra) != width:
                raise InvalidParameter("occupation vector does not match the register width")
            if sum(ket) > self.photon_cap or sum(bra) > self.photon_cap:
                raise CapExceeded(
                    f"occupation exceeds photon cap {self.photon_cap}: {ket} / {bra}"
                )
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))
        object.__setattr__(self, "_index", MappingProxyType(index))

    # --- register lookups ---------------------------------------------------

    @property
    def labels(self) -> tuple[str, ...]:
        """Distinct mode labels in register order."""
        return tuple(dict.fromkeys(mode.label for mode in self.modes))

    def index_of(self, mode: ModeIndex) -> int:
        """Position of a mode in the register."""
        try:
            return self._index[mode]
        except KeyError:
            raise UnknownMode(f"mode {mode} is not in the register") from None

    def positions(self, label: str) -> tuple[int, int]:
        """Positions of the H and V modes of a label."""
        return (
            self.index_of(ModeIndex(label, "H")),
            self.index_of(ModeIndex(label, "V")),
        )

    # --- scalar properties --------------------------------------------------

    def trace(self) -> float:
        """Real part of the trace."""
        return math.fsum(v.real for (ket, bra), v in self.entries.items() if ket == bra)

    def block_traces(self) -> dict[int, float]:
        """Trace restricted to each total-photon-number block."""
        blocks: dict[int, list[float]] = defaultdict(list)
        for (ket, bra), v in self.entries.items():
            if ket == bra:
                blocks[sum(ket)].append(v.real)
        return {n: math.fsum(values) for n, values in sorted(blocks.items())}

    def is_hermitian(self, tol: float = OPERATOR_TOLERANCE) -> bool:
        """entry(K, B) == conj(entry(B, K)) within tol."""
        for (ket, bra), v in self.entries.items():
            mirror = self.entries.get((bra, ket), 0j)
            if abs(v - mirror.conjugate()) > tol:
                return False
        return True

    def crosses_blocks(self, tol: float = OPERATOR_TOLERANCE) -> bool:
        """True if any entry couples different total photon numbers."""
        return any(
            sum(ket) != sum(bra) and abs(v) > tol for (ket, bra), v in self.entries.items()
        )

    def population(self, counts: Mapping[ModeIndex, int]) -> float:
        """Ideal-detector probability of the given counts on a subset of modes."""
        positions = [(self.index_of(mode), n) for mode, n in counts.items()]
        return math.fsum(
            v.real
            for (ket, bra), v in self.entries.items()
            if ket == bra and all(ket[p] == n for p, n in positions)
        )


@dataclass(frozen=True)
class DetectionPattern:
    """Required photon counts on a set of PNR detectors of common efficiency."""

    requirements: Mapping[ModeIndex, int]
    efficiency: float

    def __post_init__(self) -> None:
        for mode, count in self.requirements.items():
            if count < 0:
                raise InvalidParameter(f"required count on {mode} must be >= 0, got {count}")
        if not 0 <= self.efficiency <= 1:
            raise InvalidParameter(f"efficiency must lie in [0, 1], got {self.efficiency}")
        object.__setattr__(self, "requirements", MappingProxyType(dict(self.requirements)))

    @classmethod
    def from_labels(cls, counts: Mapping[str, int], efficiency: float) -> "DetectionPattern":
        """Build from {'c_H': 1, 'c_V': 1, ...} notation."""
        return cls({ModeIndex.parse(name): k for name, k in counts.items()}, efficiency)


# =============================================================================
# State Construction
# =============================================================================


def _make(
    modes: Sequence[ModeIndex], entries: Mapping[EntryKey, complex], photon_cap: int
) -> FockOperator:
    pruned = {key: v for key, v in entries.items() if abs(v) > AMPLITUDE_FLOOR}
    return FockOperator(modes=tuple(modes), entries=pruned, photon_cap=photon_cap)


def pure_state(
    modes: Sequence[ModeIndex],
    amplitudes: Mapping[Occupation, complex],
    photon_cap: int,
) -> FockOperator:
    """|psi><psi| for psi = sum amplitudes[occ] |occ>."""
    entries = {
        (ket, bra): a * b.conjugate()
        for ket, a in amplitudes.items()
        for bra, b in amplitudes.items()
    }
    return _make(modes, entries, photon_cap)


def fock_state(
    labels: Sequence[str], counts: Mapping[str, int], photon_cap: int
) -> FockOperator:
    """Number state on the modes of labels, counts given as {'e_H': 1, ...}."""
    modes = modes_for(labels)
    occupation = [0] * len(modes)
    for name, n in counts.items():
        occupation[modes.index(ModeIndex.parse(name))] = n
    return pure_state(modes, {tuple(occupation): 1.0 + 0j}, photon_cap)


def vacuum(labels: Sequence[str], photon_cap: int = 0) -> FockOperator:
    """Vacuum projector on the modes of labels."""
    modes = modes_for(labels)
    zero = (0,) * len(modes)
    return FockOperator(modes=modes, entries={(zero, zero): 1.0 + 0j}, photon_cap=photon_cap)


def _pair_ket(n: int) -> dict[Occupation, complex]:
    """
    |phi_n> = (x_H y_H + x_V y_V)^n |0> / (n! sqrt(n+1)) on modes (x_H, x_V, y_H, y_V).
    """
    poly: dict[Occupation, float] = {(0, 0, 0, 0): 1.0}
    for _ in range(n):
        grown: dict[Occupation, float] = defaultdict(float)
        for (xh, xv, yh, yv), c in poly.items():
            grown[(xh + 1, xv, yh + 1, yv)] += c
            grown[(xh, xv + 1, yh, yv + 1)] += c
        poly = grown
    norm = 1 / (math.factorial(n) * math.sqrt(n + 1))
    return {
        occ: complex(c * norm * math.prod(math.sqrt(math.factorial(k)) for k in occ))
        for occ, c in poly.items()
    }


def build_pair_source(
    stats: PhotonStatistics,
    mode_x: str,
    mode_y: str,
    cap: int,
    coherent: bool = False,
) -> FockOperator:
    """
    Polarization-entangled pair source on labels mode_x, mode_y.

    The default is the mixture sum_n p_n |phi_n><phi_n|; coherent=True builds
    the pure superposition sum_n sqrt(p_n) |phi_n> instead.

    Raises:
        CapExceeded: 2 * n_max photons do not fit under cap.
    """
    if 2 * stats.n_max > cap:
        raise CapExceeded(f"a source with n_max={stats.n_max} needs cap >= {2 * stats.n_max}")

    modes = modes_for((mode_x, mode_y))
    kets = {n: _pair_ket(n) for n in stats.support()}

    if coherent:
        psi: dict[Occupation, complex] = defaultdict(complex)
        for n, ket in kets.items():
            for occ, a in ket.items():
                psi[occ] += math.sqrt(stats.p(n)) * a
        return pure_state(modes, psi, cap)

    entries: dict[EntryKey, complex] = defaultdict(complex)
    for n, ket in kets.items():
        for k_occ, a in ket.items():
            for b_occ, b in ket.items():
                entries[(k_occ, b_occ)] += stats.p(n) * a * b.conjugate()
    return _make(modes, entries, cap)


# =============================================================================
# Register Manipulation
# =============================================================================


def tensor(first: FockOperator, second: FockOperator) -> FockOperator:
    """Tensor product on the concatenated register."""
    clash = set(first.modes) & set(second.modes)
    if clash:
        raise InvalidParameter(f"registers share modes: {sorted(str(m) for m in clash)}")
    entries = {
        (k1 + k2, b1 + b2): v1 * v2
        for (k1, b1), v1 in first.entries.items()
        for (k2, b2), v2 in second.entries.items()
    }
    return _make(first.modes + second.modes, entries, first.photon_cap + second.photon_cap)


def partial_trace(state: FockOperator, labels: Iterable[str]) -> FockOperator:
    """Trace out every mode of the given labels."""
    traced = {p for label in labels for p in state.positions(label)}
    kept = [p for p in range(len(state.modes)) if p not in traced]
    entries: dict[EntryKey, complex] = defaultdict(complex)
    for (ket, bra), v in state.entries.items():
        if all(ket[p] == bra[p] for p in traced):
            entries[(tuple(ket[p] for p in kept), tuple(bra[p] for p in kept))] += v
    return _make([state.modes[p] for p in kept], entries, state.photon_cap)


def relabel(state: FockOperator, mapping: Mapping[str, str]) -> FockOperator:
    """Rename mode labels; unmapped labels are kept."""
    for label in mapping:
        state.positions(label)
    modes = [ModeIndex(mapping.get(m.label, m.label), m.polarization) for m in state.modes]
    return FockOperator(modes=tuple(modes), entries=state.entries, photon_cap=state.photon_cap)


def _extend(state: FockOperator, labels: Sequence[str]) -> FockOperator:
    """Append vacuum modes for new labels."""
    extra = modes_for(labels)
    pad = (0,) * len(extra)
    entries = {(ket + pad, bra + pad): v for (ket, bra), v in state.entries.items()}
    return FockOperator(
        modes=state.modes + extra, entries=entries, photon_cap=state.photon_cap
    )


# =============================================================================
# Linear Optics
# =============================================================================

Transform = Mapping[ModeIndex, Mapping[ModeIndex, complex]]


def apply_linear_optics(state: FockOperator, transform: Transform) -> FockOperator:
    """
    Apply a_in^dagger -> sum_out transform[in][out] a_out^dagger.

    The transform must be closed: every output mode is also an input mode.
    """
    columns: dict[int, list[tuple[int, complex]]] = {
        state.index_of(src_mode): [(state.index_of(dst), complex(u)) for dst, u in row.items()]
        for src_mode, row in transform.items()
    }
    affected = sorted(columns)
    if any(dst not in columns for row in columns.values() for dst, _ in row):
        raise InvalidParameter("linear-optics transform is not closed over its modes")

    cache: dict[Occupation, dict[Occupation, complex]] = {}

    def expand(occ: Occupation) -> dict[Occupation, complex]:
        if occ not in cache:
            cache[occ] = _expand_ket(occ, affected, columns)
        return cache[occ]

    entries: dict[EntryKey, complex] = defaultdict(complex)
    for (ket, bra), v in state.entries.items():
        bra_terms = expand(bra)
        for new_ket, a in expand(ket).items():
            va = v * a
            for new_bra, b in bra_terms.items():
                entries[(new_ket, new_bra)] += va * b.conjugate()
    return _make(state.modes, entries, state.photon_cap)


def _expand_ket(
    occ: Occupation,
    affected: list[int],
    columns: Mapping[int, list[tuple[int, complex]]],
) -> dict[Occupation, complex]:
    """Expand prod_i (a_i^dagger)^n_i / sqrt(n_i!) |0> through the transform."""
    base = list(occ)
    norm = 1.0
    photons: list[int] = []
    for p in affected:
        n = occ[p]
        if n:
            photons.extend([p] * n)
            norm /= math.sqrt(math.factorial(n))
            base[p] = 0

    poly: dict[Occupation, complex] = {tuple(base): complex(norm)}
    for p in photons:
        grown: dict[Occupation, complex] = defaultdict(complex)
        for exps, c in poly.items():
            for q, u in columns[p]:
                bumped = list(exps)
                bumped[q] += 1
                grown[tuple(bumped)] += c * u
        poly = grown

    result: dict[Occupation, complex] = {}
    for exps, c in poly.items():
        amp = c * math.prod(math.sqrt(math.factorial(exps[q])) for q in affected)
        if abs(amp) > AMPLITUDE_FLOOR:
            result[exps] = amp
    return result


def apply_beam_splitter(state: FockOperator, a: str, b: str) -> FockOperator:
    """
    Polarization-preserving 50:50 splitter.

    a^dagger -> (a^dagger + b^dagger)/sqrt2, b^dagger -> (a^dagger - b^dagger)/sqrt2
    per polarization, the output ports reusing the input labels.
    """
    transform: dict[ModeIndex, dict[ModeIndex, complex]] = {}
    for pol in POLARIZATIONS:
        ma, mb = ModeIndex(a, pol), ModeIndex(b, pol)
        transform[ma] = {ma: _INV_SQRT2, mb: _INV_SQRT2}
        transform[mb] = {ma: _INV_SQRT2, mb: -_INV_SQRT2}
    return apply_linear_optics(state, transform)


def apply_hadamard(state: FockOperator, x: str) -> FockOperator:
    """Polarization Hadamard: H -> (H + V)/sqrt2, V -> (H - V)/sqrt2."""
    h, v = ModeIndex(x, "H"), ModeIndex(x, "V")
    return apply_linear_optics(
        state,
        {h: {h: _INV_SQRT2, v: _INV_SQRT2}, v: {h: _INV_SQRT2, v: -_INV_SQRT2}},
    )


def apply_loss(state: FockOperator, x: str, eta: float) -> FockOperator:
    """
    Lossy channel of transmittance eta on label x.

    Couples x to a fresh vacuum environment through a splitter of
    transmittance eta and traces the environment out.
    """
    if not 0 <= eta <= 1:
        raise InvalidParameter(f"transmittance must lie in [0, 1], got {eta}")
    state.positions(x)

    env = f"{x}~env"
    extended = _extend(state, [env])
    t, r = math.sqrt(eta), math.sqrt(1 - eta)
    transform: dict[ModeIndex, dict[ModeIndex, complex]] = {}
    for pol in POLARIZATIONS:
        mx, me = ModeIndex(x, pol), ModeIndex(env, pol)
        transform[mx] = {mx: t, me: r}
        transform[me] = {mx: -r, me: t}
    return partial_trace(apply_linear_optics(extended, transform), [env])


# =============================================================================
# Measurement
# =============================================================================


def postselect_state(state: FockOperator, pattern: DetectionPattern) -> FockOperator:
    """
    Unnormalized conditional operator tr_measured(Pi rho) on the unmeasured modes.

    Pi is the product of diagonal PNR POVM elements on the pattern's modes.
    """
    measured = [(state.index_of(mode), k) for mode, k in pattern.requirements.items()]
    measured_positions = {p for p, _ in measured}
    kept = [p for p in range(len(state.modes)) if p not in measured_positions]

    entries: dict[EntryKey, complex] = defaultdict(complex)
    for (ket, bra), v in state.entries.items():
        if any(ket[p] != bra[p] for p in measured_positions):
            continue
        weight = math.prod(pnr_weight(k, ket[p], pattern.efficiency) for p, k in measured)
        if weight == 0.0:
            continue
        entries[(tuple(ket[p] for p in kept), tuple(bra[p] for p in kept))] += v * weight
    return _make([state.modes[p] for p in kept], entries, state.photon_cap)


def postselect_probability(state: FockOperator, pattern: DetectionPattern) -> float:
    """tr(Pi rho) for the pattern's POVM element."""
    return postselect_state(state, pattern).trace()
