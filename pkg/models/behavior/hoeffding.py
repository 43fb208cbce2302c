"""
Exact Hoeffding decomposition on finite product spaces.

Date: 2026-10-18

Architectural role:
- Turns a UStatKernel on a DiscreteProductSpace into its value tensor and
  the orthogonal components W_J, J ⊆ {0, …, n−1}
- Supplies ρ², D and the coordinate fourth-moment sum to models.behavior.dejong

Design notes:
- W is held as a dense tensor of shape (s_1, …, s_n). E[W | F_L] is a
  tensordot of W with the probability vectors of the coordinates outside
  L, taken from the last axis down so earlier axis numbers stay valid.
- W_J = Σ_{L ⊆ J} (−1)^{|J|−|L|} E[W | F_L] (Möbius inversion over the
  subset lattice). Conditional tables are computed once per L.
- `max_order` stops at |J| <= m; the residual variance then tells whether
  anything of higher order is left.
- exact=True runs the same code on object arrays of Fractions.
- sequential_projection_decompose builds the components a second way, as
  products of the commuting projections E_j and (I − E_j), and serves as an
  independent oracle.

Invariants:
- The enumeration size Π s_j never exceeds the configured cap; neither does
  the number of (J, L) pairs the Möbius sums visit.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from models.behavior.errors import ContractError, ResourceError
from models.behavior.parallel import chunk, ordered_map
from models.domain.product_space import DiscreteProductSpace, UStatKernel
from models.records.hoeffding import (
    ComponentStats,
    DegeneracyCheck,
    HoeffdingDecomposition,
    mask_to_subset,
)

logger = logging.getLogger(__name__)

DEFAULT_ENUM_CAP = 2_000_000
ZERO_COMPONENT_RTOL = 1e-12
DEGENERACY_TOL = 1e-10


# ---------------------------------------------------------------------
# Tensor helpers
# ---------------------------------------------------------------------

def popcount(mask: int) -> int:
    return bin(mask).count("1")


def masks_up_to(n: int, max_order: int) -> List[int]:
    """All subsets of size <= max_order, ordered by size then mask value."""
    out: List[int] = []
    for k in range(0, max_order + 1):
        level = [sum(1 << i for i in combo) for combo in combinations(range(n), k)]
        out.extend(sorted(level))
    return out


def submasks(mask: int) -> Iterator[int]:
    """Every L ⊆ mask, including mask and 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def require_cap(required: int, cap: int) -> None:
    if required > cap:
        raise ResourceError(required, cap)


def mobius_work(n: int, max_order: int) -> int:
    """Σ_{k<=m} C(n, k)·2^k: (J, L) pairs visited by the Möbius sums."""
    return sum(math.comb(n, k) * (1 << k) for k in range(0, max_order + 1))


def kernel_tensor(
    k: UStatKernel, s: DiscreteProductSpace, exact: bool = False, cap: int = DEFAULT_ENUM_CAP
) -> np.ndarray:
    """ψ on every point of the product support, as a tensor of shape s.shape."""
    require_cap(s.size, cap)
    if exact:
        values = np.empty(s.shape, dtype=object)
        for idx in np.ndindex(*s.shape):
            values[idx] = _as_exact(k.evaluate_atoms(s, idx))
        return values
    if k.table is not None:
        values = np.asarray(k.table, dtype=float)
        if values.shape != s.shape:
            raise ContractError(f"kernel table has shape {values.shape}, space has {s.shape}")
    else:
        idx = np.indices(s.shape).reshape(s.n, -1).T
        values = k.evaluate_indices(s, idx).reshape(s.shape)
    if not np.all(np.isfinite(values)):
        raise ContractError(f"kernel '{k.name}' is not finite on the product support")
    return values


def _as_exact(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    value = float(value)
    if not math.isfinite(value):
        raise ContractError("kernel is not finite on the product support")
    return Fraction(value)


def expectation(tensor: np.ndarray, probs: Sequence[np.ndarray]):
    """E over all coordinates of a full tensor."""
    out = tensor
    for j in reversed(range(tensor.ndim)):
        out = np.tensordot(out, probs[j], axes=([j], [0]))
    return out[()] if isinstance(out, np.ndarray) else out


def condition_tensor(tensor: np.ndarray, probs: Sequence[np.ndarray], keep: int) -> np.ndarray:
    """
    E[W | F_keep] for a full tensor W.

    Returns:
        table whose axes are the coordinates of `keep` in increasing order
        (a 0-d array when keep = 0)
    """
    out = tensor
    for j in reversed(range(tensor.ndim)):
        if not (keep >> j) & 1:
            out = np.tensordot(out, probs[j], axes=([j], [0]))
    return np.asarray(out, dtype=tensor.dtype)


def expand_to(table: np.ndarray, sub: int, mask: int) -> np.ndarray:
    """View a table over `sub` as broadcastable over the axes of `mask` ⊇ sub."""
    shape = []
    it = iter(table.shape)
    for j in mask_to_subset(mask):
        shape.append(next(it) if (sub >> j) & 1 else 1)
    return table.reshape(shape)


def weighted_mean(table: np.ndarray, mask: int, probs: Sequence[np.ndarray]):
    """E of a table living on the coordinates of `mask`."""
    coords = mask_to_subset(mask)
    out = table
    for axis in reversed(range(len(coords))):
        out = np.tensordot(out, probs[coords[axis]], axes=([axis], [0]))
    return out[()] if isinstance(out, np.ndarray) else out


def _is_zero(table: np.ndarray, exact: bool, scale: float) -> bool:
    if exact:
        return all(v == 0 for v in table.flat)
    return float(np.max(np.abs(table))) <= ZERO_COMPONENT_RTOL * scale


# ---------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------

def conditional_expectation(
    k: UStatKernel,
    s: DiscreteProductSpace,
    subset: Sequence[int],
    exact: bool = False,
    cap: int = DEFAULT_ENUM_CAP,
) -> np.ndarray:
    """E[W | F_L] as a table over the coordinates of L (0-based, any order)."""
    keep = 0
    for j in subset:
        if not 0 <= j < s.n:
            raise ContractError(f"coordinate {j} outside 0..{s.n - 1}")
        keep |= 1 << int(j)
    tensor = kernel_tensor(k, s, exact=exact, cap=cap)
    return condition_tensor(tensor, s.prob_vectors(exact), keep)


def decompose_tensor(
    tensor: np.ndarray,
    probs: Sequence[np.ndarray],
    max_order: Optional[int] = None,
    exact: bool = False,
    threads: int = 1,
    cap: int = DEFAULT_ENUM_CAP,
) -> HoeffdingDecomposition:
    """Möbius decomposition of a value tensor (see hoeffding_decompose)."""
    n = tensor.ndim
    m = n if max_order is None else min(int(max_order), n)
    if m < 0:
        raise ContractError(f"max_order must be >= 0, got {max_order}")
    require_cap(mobius_work(n, m), cap)

    masks = masks_up_to(n, m)
    conditional: Dict[int, np.ndarray] = {
        mask: condition_tensor(tensor, probs, mask) for mask in masks
    }
    mean = conditional[0][()]
    second = expectation(tensor * tensor, probs)
    variance = second - mean * mean
    scale = 1.0 if exact else max(1.0, float(np.max(np.abs(tensor))))

    def build(block: Sequence[int]) -> List[Tuple[int, np.ndarray, object]]:
        out = []
        for mask in block:
            dims = tuple(tensor.shape[j] for j in mask_to_subset(mask))
            comp = np.zeros(dims, dtype=object) if exact else np.zeros(dims)
            for sub in submasks(mask):
                sign = -1 if (popcount(mask) - popcount(sub)) % 2 else 1
                term = expand_to(conditional[sub], sub, mask)
                comp = comp + term if sign > 0 else comp - term
            if _is_zero(comp, exact, scale):
                continue
            out.append((mask, comp, weighted_mean(comp * comp, mask, probs)))
        return out

    nonempty = masks[1:]
    parts = ordered_map(build, chunk(nonempty, max(threads, 1) * 4), threads)
    components: Dict[int, np.ndarray] = {}
    sigma2: Dict[int, object] = {}
    for part in parts:
        for mask, comp, s2 in part:
            components[mask] = comp
            sigma2[mask] = s2

    logger.debug("hoeffding: n=%d max_order=%d, %d non-zero components", n, m, len(components))
    return HoeffdingDecomposition(
        n=n,
        shape=tuple(tensor.shape),
        components=components,
        sigma2=sigma2,
        mean=mean,
        variance=variance,
        max_order=m,
        exact=exact,
        method="mobius",
        probs=tuple(probs),
    )


def hoeffding_decompose(
    k: UStatKernel,
    s: DiscreteProductSpace,
    max_order: Optional[int] = None,
    exact: bool = False,
    threads: int = 1,
    cap: int = DEFAULT_ENUM_CAP,
) -> HoeffdingDecomposition:
    """
    All components W_J with |J| <= max_order (default: every J).

    Raises:
        ResourceError: product support or subset work above cap
    """
    tensor = kernel_tensor(k, s, exact=exact, cap=cap)
    return decompose_tensor(tensor, s.prob_vectors(exact), max_order, exact, threads, cap)


def sequential_projection_decompose(
    k: UStatKernel,
    s: DiscreteProductSpace,
    max_order: Optional[int] = None,
    exact: bool = False,
    cap: int = DEFAULT_ENUM_CAP,
) -> HoeffdingDecomposition:
    """
    W_J = Π_{j∈J}(I − E_j) Π_{j∉J} E_j W, one coordinate at a time.

    Each node of the recursion holds a table whose leading axes are the
    already-kept coordinates and whose trailing axes are the coordinates not
    yet processed.
    """
    tensor = kernel_tensor(k, s, exact=exact, cap=cap)
    probs = s.prob_vectors(exact)
    n = s.n
    m = n if max_order is None else min(int(max_order), n)
    require_cap(mobius_work(n, m), cap)

    nodes: List[Tuple[np.ndarray, int]] = [(tensor, 0)]
    for j in range(n):
        nxt: List[Tuple[np.ndarray, int]] = []
        for table, mask in nodes:
            axis = popcount(mask)
            averaged = np.tensordot(table, probs[j], axes=([axis], [0]))
            averaged = np.asarray(averaged, dtype=tensor.dtype)
            nxt.append((averaged, mask))
            if popcount(mask) < m:
                nxt.append((table - np.expand_dims(averaged, axis), mask | (1 << j)))
        nodes = nxt

    mean = nodes[0][0][()]
    variance = expectation(tensor * tensor, probs) - mean * mean
    scale = 1.0 if exact else max(1.0, float(np.max(np.abs(tensor))))
    components: Dict[int, np.ndarray] = {}
    sigma2: Dict[int, object] = {}
    for table, mask in nodes:
        if mask == 0 or _is_zero(table, exact, scale):
            continue
        components[mask] = table
        sigma2[mask] = weighted_mean(table * table, mask, probs)

    return HoeffdingDecomposition(
        n=n,
        shape=s.shape,
        components=components,
        sigma2=sigma2,
        mean=mean,
        variance=variance,
        max_order=m,
        exact=exact,
        method="sequential",
        probs=tuple(probs),
    )


def verify_degeneracy(dec: HoeffdingDecomposition, d: int, tol: float = DEGENERACY_TOL) -> DegeneracyCheck:
    """
    True iff max |W_K| <= tol for every |K| ≠ d.

    A truncated decomposition must reach order d; components above
    max_order are covered by the residual variance.
    """
    if d < 0:
        raise ContractError(f"degeneracy order must be >= 0, got {d}")
    if not dec.is_full and dec.max_order < d:
        raise ContractError(f"decomposition stops at order {dec.max_order} < d = {d}")

    offending = []
    if d != 0 and abs(float(dec.mean)) > tol:
        offending.append(())
    for mask in sorted(dec.components, key=lambda m: (popcount(m), m)):
        if popcount(mask) == d:
            continue
        if float(np.max(np.abs(dec.components[mask].astype(float)))) > tol:
            offending.append(mask_to_subset(mask))

    unresolved = 0.0
    if not dec.is_full:
        unresolved = max(dec.residual_variance, 0.0)
        if unresolved <= tol * max(1.0, float(dec.variance)):
            unresolved = 0.0
    ok = not offending and unresolved == 0.0
    if not ok:
        logger.debug("degeneracy at order %d fails: %d offending subsets", d, len(offending))
    return DegeneracyCheck(ok=ok, d=d, offending=tuple(offending), unresolved_variance=unresolved)


def component_stats(dec: HoeffdingDecomposition, d: int, tol: float = DEGENERACY_TOL) -> ComponentStats:
    """
    ρ² = max_i Σ_{K∋i, |K|=d} σ²_K and D = max_J E[W_J⁴]/σ⁴_J.

    Order-d subsets with σ²_J = 0 are excluded from D and listed.

    Raises:
        ContractError: W is not degenerate of order d, or every order-d
            component vanishes (D undefined)
    """
    check = verify_degeneracy(dec, d, tol)
    if not check:
        raise ContractError(
            f"W is not degenerate of order {d}: offending {list(check.offending)}, "
            f"unresolved variance {check.unresolved_variance}"
        )

    per_coord = [0.0] * dec.n
    sigma2_list = []
    big_d: Optional[float] = None
    present = set()
    for mask in sorted(dec.components, key=lambda m: m):
        if popcount(mask) != d:
            continue
        s2 = float(dec.sigma2[mask])
        if s2 <= 0.0:
            continue
        present.add(mask)
        sigma2_list.append((mask_to_subset(mask), s2))
        for i in mask_to_subset(mask):
            per_coord[i] += s2
        comp = dec.components[mask]
        fourth = float(weighted_mean(comp * comp * comp * comp, mask, dec.probs))
        ratio = fourth / (s2 * s2)
        big_d = ratio if big_d is None else max(big_d, ratio)

    excluded = tuple(
        mask_to_subset(mask)
        for mask in masks_up_to(dec.n, d)
        if popcount(mask) == d and mask not in present
    )
    if big_d is None:
        raise ContractError(f"every order-{d} component vanishes; D is undefined")
    if excluded:
        logger.warning("%d order-%d components have zero variance and are left out of D", len(excluded), d)
    return ComponentStats(
        d=d,
        rho2=max(per_coord),
        big_d=big_d,
        sigma2_list=tuple(sigma2_list),
        excluded=excluded,
    )


def sigma_quadruple_sum(stats: ComponentStats) -> float:
    """
    Σ_{J,K,L,M} |J∩K∩L∩M|·σ_Jσ_Kσ_Lσ_M over the order-d components of W,
    restricted to quadruples in which every index is covered at least twice.
    """
    return paired_quadruple_sum([(subset, math.sqrt(s2)) for subset, s2 in stats.sigma2_list])


def paired_quadruple_sum(components: Sequence[Tuple[Sequence[int], float]]) -> float:
    """
    Σ |J∩K∩L∩M|·σ_Jσ_Kσ_Lσ_M over quadruples with J∩K∩L∩M ≠ ∅ whose every
    index lies in at least two of J, K, L, M.

    For degenerate components E[W_J W_K W_L W_M] = 0 on every other
    quadruple, and |E[W_J W_K W_L W_M]| <= D·σ_Jσ_Kσ_Lσ_M on these, so
    D times this sum majorizes Σ_j E[(W − E[W | X_{−j}])⁴].

    The |J∩K∩L∩M| weight is realized by summing, for each coordinate j,
    over the quadruples that all contain j.
    """
    by_coord: Dict[int, List[Tuple[int, float]]] = {}
    for subset, sigma in components:
        mask = 0
        for i in subset:
            mask |= 1 << int(i)
        for i in subset:
            by_coord.setdefault(int(i), []).append((mask, float(sigma)))

    terms: List[float] = []
    for entries in by_coord.values():
        masks = np.array([m for m, _ in entries], dtype=np.int64)
        sig = np.array([s for _, s in entries])
        b, c, e = masks[:, None, None], masks[None, :, None], masks[None, None, :]
        weight = sig[:, None, None] * sig[None, :, None] * sig[None, None, :]
        bc, be, ce = b & c, b & e, c & e
        for a, sa in entries:
            union = a | b | c | e
            twice = (a & b) | (a & c) | (a & e) | bc | be | ce
            terms.append(sa * float(np.sum(weight[union == twice])))
    return math.fsum(terms)


def tensor_fourth_moment_sum(tensor: np.ndarray, probs: Sequence[np.ndarray]) -> float:
    """Σ_j E[(W − E[W | X_{−j}])⁴] for a full value tensor."""
    terms = []
    for j in range(tensor.ndim):
        avg = np.tensordot(tensor, probs[j], axes=([j], [0]))
        diff = tensor - np.expand_dims(avg, j)
        terms.append(float(expectation(diff ** 4, probs)))
    return math.fsum(terms)


def fourth_moment_sum(k: UStatKernel, s: DiscreteProductSpace, cap: int = DEFAULT_ENUM_CAP) -> float:
    """Σ_j E[(W − E[W | X_{−j}])⁴] by enumeration."""
    return tensor_fourth_moment_sum(kernel_tensor(k, s, cap=cap), s.prob_vectors())


# ---------------------------------------------------------------------
# Property checks
# ---------------------------------------------------------------------

def reconstruct(dec: HoeffdingDecomposition) -> np.ndarray:
    """Σ_J W_J as a full tensor."""
    full = (1 << dec.n) - 1
    out = np.full(dec.shape, dec.mean, dtype=object if dec.exact else float)
    for mask, comp in dec.components.items():
        out = out + expand_to(comp, mask, full)
    return out


def reconstruction_error(dec: HoeffdingDecomposition, tensor: np.ndarray) -> float:
    diff = reconstruct(dec) - tensor
    return float(np.max(np.abs(diff.astype(float)))) if diff.size else 0.0


def component_inner(dec: HoeffdingDecomposition, j_mask: int, k_mask: int):
    """E[W_J W_K]."""
    union = j_mask | k_mask
    product = expand_to(dec.component(j_mask), j_mask, union) * expand_to(dec.component(k_mask), k_mask, union)
    product = np.broadcast_to(product, tuple(dec.shape[i] for i in mask_to_subset(union)))
    return weighted_mean(np.asarray(product), union, dec.probs)


def max_orthogonality_defect(dec: HoeffdingDecomposition) -> float:
    """max_{J≠K} |E[W_J W_K]| over stored components."""
    masks = sorted(dec.components)
    worst = 0.0
    for a, j in enumerate(masks):
        for kk in masks[a + 1:]:
            worst = max(worst, abs(float(component_inner(dec, j, kk))))
    return worst


def projection_defect(dec: HoeffdingDecomposition, j_mask: int, k_mask: int) -> float:
    """max |E[W_J | F_K]|; zero whenever J ⊄ K."""
    comp = dec.component(j_mask)
    coords = mask_to_subset(j_mask)
    out = comp
    for axis in reversed(range(len(coords))):
        if not (k_mask >> coords[axis]) & 1:
            out = np.tensordot(out, dec.probs[coords[axis]], axes=([axis], [0]))
    out = np.asarray(out)
    return float(np.max(np.abs(out.astype(float)))) if out.size else 0.0
