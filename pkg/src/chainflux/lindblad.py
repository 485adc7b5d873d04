"""Jump operators, dissipators and the full generator in vectorized form.

Two routes to the dissipators are built here.  The eigenbasis ("global")
route decomposes each endpoint coupling operator into lowering components
between energy eigenstates, groups them into Bohr-frequency bins and keeps
cross terms only within a bin (full secular approximation).  The site-basis
("local") route attaches thermal raising/lowering of the bare endpoint qubit
at its own gap, ignoring the interqubit coupling in the rates.

All rates are expressed through the Bose occupation nbar and nbar + 1, never
through exp(beta * omega), so zero temperature and large beta are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateTransition,
    DimensionMismatch,
    NonPositiveFrequency,
)
from .model import BathSpec, ChainSpec
from .operators import (
    EigenSystem,
    build_chain_hamiltonian,
    diagonalize,
    kron_dense,
    site_operator,
)

# Smallest Bohr frequency the eigenbasis construction will accept; below it
# the Bose occupation diverges for any bath at nonzero temperature.
OMEGA_MIN = 1e-8

# Relative tolerance used to group jump operators into one frequency bin.
SECULAR_TOL = 1e-9

# Matrix elements below this are treated as structural zeros.
ELEMENT_TOL = 1e-14

# exp(x) overflows double precision near 709; beyond this the occupation
# underflows to zero anyway.
_EXP_ARG_MAX = 700.0


def bose_occupation(omega: float, temperature: float) -> float:
    """Mean occupation 1 / (exp(omega/T) - 1) of a bath mode, exact at T = 0."""
    if omega <= 0:
        raise NonPositiveFrequency(f"omega must be > 0, got {omega}")
    if temperature == 0:
        return 0.0
    x = omega / temperature
    if x > _EXP_ARG_MAX:
        return 0.0
    return 1.0 / np.expm1(x)


def spectral_density(gamma: float, omega: float, temperature: float) -> float:
    """Wide-band absorption rate gamma * nbar(omega, T).

    The matching emission rate is gamma * (nbar + 1); detailed balance
    nbar * exp(omega/T) = nbar + 1 is used instead of exponentiating.
    """
    return gamma * bose_occupation(omega, temperature)


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stack a matrix."""
    return rho.reshape(-1, order="F")


def unvectorize(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    return v.reshape((dim, dim), order="F")


def trace_vector(dim: int) -> np.ndarray:
    """Row vector implementing the trace on column-stacked matrices."""
    return np.eye(dim, dtype=complex).reshape(-1, order="F")


@dataclass(frozen=True)
class JumpOperator:
    """A lowering component of a coupling operator.

    ``operator`` stores weight * |p><q| between eigenstates with
    E_q - E_p = omega > 0, so [H, operator] = -omega * operator.  ``omega``
    is snapped to its frequency bin; operators sharing a bin carry an
    identical value.
    """

    operator: np.ndarray
    omega: float
    reservoir: int
    weight: float


def global_jump_operators(
    es: EigenSystem,
    coupling: np.ndarray,
    reservoir: int,
    secular_tol: float = SECULAR_TOL,
) -> list:
    """Decompose a coupling operator into binned lowering eigenoperators.

    For every ordered eigenpair (p, q) with E_q - E_p above the frequency
    cutoff, the matrix element <p|coupling|q> becomes the weight of one jump
    operator.  Frequencies closer than ``secular_tol`` (relative to the
    energy scale) are merged into a single bin.  Zero matrix elements are
    dropped; a nonzero element across a sub-cutoff gap raises
    DegenerateTransition.
    """
    energies = es.energies
    vectors = es.vectors
    d = es.dim
    elements = vectors.conj().T @ coupling @ vectors

    raw = []
    for p in range(d):
        for q in range(d):
            if p == q:
                continue
            omega = energies[q] - energies[p]
            elem = elements[p, q]
            if abs(elem) <= ELEMENT_TOL:
                continue
            if omega <= 0:
                continue  # the raising partner is handled via the (q, p) pair
            if omega <= OMEGA_MIN:
                raise DegenerateTransition(
                    f"transition at omega = {omega:.3e} below cutoff {OMEGA_MIN:.1e} "
                    f"between eigenstates {p} and {q}",
                    omega=omega,
                )
            raw.append((omega, p, q, elem))
    # degenerate pairs with a coupling element are unresolvable as well
    for p in range(d):
        for q in range(p + 1, d):
            if abs(energies[q] - energies[p]) <= OMEGA_MIN and abs(elements[p, q]) > ELEMENT_TOL:
                raise DegenerateTransition(
                    f"coupling element across degenerate eigenstates {p}, {q}",
                    omega=abs(energies[q] - energies[p]),
                )

    raw.sort(key=lambda item: (item[0], item[1], item[2]))
    scale = max(1.0, np.abs(energies).max())
    bins = []  # list of lists of raw entries
    for item in raw:
        if bins and item[0] - bins[-1][0][0] <= secular_tol * scale:
            bins[-1].append(item)
        else:
            bins.append([item])

    jumps = []
    for group in bins:
        omega_bin = float(np.mean([item[0] for item in group]))
        for _, p, q, elem in group:
            if abs(elem.imag) > 1e-10 * max(1.0, abs(elem)):
                weight = complex(elem)
            else:
                weight = float(elem.real)
            V = np.outer(vectors[:, p], vectors[:, q].conj()) * weight
            jumps.append(JumpOperator(operator=V, omega=omega_bin,
                                      reservoir=reservoir, weight=weight))
    return jumps


def _lindblad_super(A: np.ndarray, rate: float) -> np.ndarray:
    """rate * (A . A^dag - {A^dag A, .}/2) on column-stacked matrices."""
    d = A.shape[0]
    eye = np.eye(d)
    AdA = A.conj().T @ A
    return rate * (
        kron_dense(A.conj(), A)
        - 0.5 * kron_dense(eye, AdA)
        - 0.5 * kron_dense(AdA.T, eye)
    )


def thermal_dissipator(A: np.ndarray, gamma: float, nbar: float) -> np.ndarray:
    """Emission at gamma (nbar + 1) through A plus absorption at gamma nbar through A^dag."""
    return _lindblad_super(A, gamma * (nbar + 1.0)) + _lindblad_super(A.conj().T, gamma * nbar)


def global_dissipator_bins(jumps, bath: BathSpec):
    """Per-frequency-bin dissipators for one reservoir.

    Jump operators sharing a bin are summed before the Lindblad form is
    applied, so equal-frequency cross terms survive while cross terms
    between different bins are dropped.
    """
    if len({jump.reservoir for jump in jumps}) > 1:
        raise ValueError("jump operators from several reservoirs in one dissipator")
    groups = {}
    for jump in jumps:
        groups.setdefault(jump.omega, []).append(jump)
    out = []
    for omega in sorted(groups):
        A = sum(j.operator for j in groups[omega])
        nbar = bose_occupation(omega, bath.temperature)
        out.append((omega, thermal_dissipator(A, bath.gamma, nbar)))
    return out


def build_global_dissipator(jumps, bath: BathSpec) -> np.ndarray:
    """Eigenbasis dissipator of one reservoir (sum over its frequency bins)."""
    if not jumps:
        raise ValueError("no jump operators supplied")
    d = jumps[0].operator.shape[0]
    D = np.zeros((d * d, d * d), dtype=complex)
    for _, piece in global_dissipator_bins(jumps, bath):
        D += piece
    return D


def build_local_dissipator(spec: ChainSpec, bath: BathSpec) -> np.ndarray:
    """Site-basis dissipator: bare thermal jumps of the attached qubit.

    Rates are evaluated at the attached qubit's own gap, ignoring the
    interqubit coupling.
    """
    site = bath.attached_site
    nbar = bose_occupation(spec.epsilons[site], bath.temperature)
    lower = site_operator(spec.n_qubits, site, "lower")
    return thermal_dissipator(lower, bath.gamma, nbar)


def liouvillian_unitary(H: np.ndarray) -> np.ndarray:
    """Superoperator of -i[H, .] in the column-stacking convention."""
    d = H.shape[0]
    eye = np.eye(d)
    return -1j * (kron_dense(eye, H) - kron_dense(H.T, eye))


def build_liouvillian(H: np.ndarray, dissipators) -> np.ndarray:
    """Full generator: unitary part plus the supplied dissipators."""
    d = H.shape[0]
    L = liouvillian_unitary(H)
    for D in dissipators:
        if D.shape != (d * d, d * d):
            raise DimensionMismatch(
                f"dissipator shape {D.shape} does not match dim {d}"
            )
        L = L + D
    return L


@dataclass(frozen=True)
class LindbladModel:
    """Assembled generator of one chain under one approach.

    ``dissipators`` holds one superoperator per reservoir, ``channels`` the
    per-frequency pieces of each (a single entry at the site gap for the
    local approach), so heat flux can be resolved by energy channel.
    """

    spec: ChainSpec
    approach: str
    hamiltonian: np.ndarray
    dissipators: tuple
    channels: tuple
    liouvillian: np.ndarray


def assemble(spec: ChainSpec, approach: str) -> LindbladModel:
    """Build Hamiltonian, per-reservoir dissipators and the full generator."""
    if approach not in ("global", "local"):
        raise ValueError(f"approach must be 'global' or 'local', got {approach!r}")
    H = build_chain_hamiltonian(spec)
    dissipators = []
    channels = []
    if approach == "global":
        es = diagonalize(H)
        for j, bath in enumerate(spec.baths):
            site = bath.attached_site
            coupling = (site_operator(spec.n_qubits, site, "raise")
                        + site_operator(spec.n_qubits, site, "lower"))
            jumps = global_jump_operators(es, coupling, reservoir=j)
            bins = global_dissipator_bins(jumps, bath)
            dissipators.append(sum(piece for _, piece in bins))
            channels.append(tuple(bins))
    else:
        for bath in spec.baths:
            D = build_local_dissipator(spec, bath)
            dissipators.append(D)
            channels.append(((spec.epsilons[bath.attached_site], D),))
    L = build_liouvillian(H, dissipators)
    return LindbladModel(
        spec=spec,
        approach=approach,
        hamiltonian=H,
        dissipators=tuple(dissipators),
        channels=tuple(channels),
        liouvillian=L,
    )
