"""Exact reference implementations used to validate the estimators.

Brute force enumerates the whole sample space in lexicographic order; the
exact pipelines run the estimators' table recursions with the merging step
removed.  Both are capped: past the caps the problem is genuinely out of
reach for exact methods.
"""

from __future__ import annotations

import numpy as np

from .errors import SizeError
from .markov import ConditionalRatio, MarkovPair, concatenate, kernel_conditional_ratio
from .product import ProductPair
from .ratios import DiscreteDist, RatioDist, indp_product, ratio_of

DEFAULT_ENUMERATION_CAP = 10_000_000
DEFAULT_SUPPORT_CAP = 1_000_000


def _check_enumeration(q: int, n: int, cap: int) -> None:
    if q**n > cap:
        raise SizeError(f"enumeration needs {q}**{n} outcomes, beyond the cap of {cap}")


def brute_force_tv_product(pair: ProductPair, *, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Half-L1 distance over all of [q]^n, enumerated lexicographically."""
    _check_enumeration(pair.q, pair.n, cap)
    vp = pair.p_marginals[0]
    vq = pair.q_marginals[0]
    for i in range(1, pair.n):
        vp = np.multiply.outer(vp, pair.p_marginals[i]).ravel()
        vq = np.multiply.outer(vq, pair.q_marginals[i]).ravel()
    return 0.5 * float(np.sum(np.abs(vp - vq)))


def brute_force_tv_markov(pair: MarkovPair, *, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Half-L1 distance over all length-n trajectories."""
    _check_enumeration(pair.q, pair.n, cap)
    q = pair.q
    vp = pair.p_init
    vq = pair.q_init
    for step in range(pair.n - 1):
        vp = (vp.reshape(-1, q)[:, :, None] * pair.p_kernels[step][None, :, :]).ravel()
        vq = (vq.reshape(-1, q)[:, :, None] * pair.q_kernels[step][None, :, :]).ravel()
    return 0.5 * float(np.sum(np.abs(vp - vq)))


def exact_ratio_product(pair: ProductPair, *, support_cap: int = DEFAULT_SUPPORT_CAP) -> RatioDist:
    """Fold the per-coordinate ratios into the full product ratio, unmerged.

    The total variation distance of the result is the exact distance between
    the two products.  The cap is checked against the worst-case table size
    before each multiplication.
    """
    ratio = ratio_of(DiscreteDist(pair.p_marginals[0]), DiscreteDist(pair.q_marginals[0]))
    for i in range(1, pair.n):
        nxt = ratio_of(DiscreteDist(pair.p_marginals[i]), DiscreteDist(pair.q_marginals[i]))
        if len(ratio) * len(nxt) > support_cap:
            raise SizeError(
                f"exact product table could reach {len(ratio) * len(nxt)} entries "
                f"at coordinate {i}, beyond the cap of {support_cap}"
            )
        ratio = indp_product(ratio, nxt)
    return ratio


def exact_ratio_markov(pair: MarkovPair, *, support_cap: int = DEFAULT_SUPPORT_CAP) -> RatioDist:
    """Run the backward concatenation recursion with no sparsification."""
    n, q = pair.n, pair.q
    if n == 1:
        return ratio_of(DiscreteDist(pair.p_init), DiscreteDist(pair.q_init))
    cond = kernel_conditional_ratio(pair.p_kernels[n - 2], pair.q_kernels[n - 2])
    for k in range(n - 1, 0, -1):
        widest = max(len(r) for r in cond.per_state)
        if widest * q > support_cap:
            raise SizeError(
                f"exact chain table could reach {widest * q} entries "
                f"at step {k}, beyond the cap of {support_cap}"
            )
        if k > 1:
            pk = pair.p_kernels[k - 2]
            qk = pair.q_kernels[k - 2]
            cond = ConditionalRatio(
                tuple(
                    concatenate(DiscreteDist(pk[x]), DiscreteDist(qk[x]), cond)
                    for x in range(q)
                )
            )
        else:
            return concatenate(DiscreteDist(pair.p_init), DiscreteDist(pair.q_init), cond)
    raise AssertionError("unreachable")
