"""Integral transforms: factorizations over the two-sided ring acting as kernels.

The ring tensor over the inner variables has infinite rank; the honest
equivalence is quasi-isomorphism, so the finite-rank representative is
produced by truncating the inner variables and is flagged as such. The
k-reduced cohomology of a transform is computed exactly from the untruncated
action complex instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Z2Complex, cohomology_over_R
from .errors import PreconditionError
from .factorization import MatrixFactorization, RMatrix, _tensor_blocks
from .series import RingCtx, Series, monomial_basis


def _split_kernel_ctx(x_ctx: RingCtx, t_ctx: RingCtx) -> RingCtx:
    n = x_ctx.n_vars
    if t_ctx.n_vars <= n:
        raise PreconditionError("kernel must live over strictly more variables")
    if t_ctx.names[:n] != x_ctx.names or t_ctx.field != x_ctx.field:
        raise PreconditionError("kernel context must extend the source context")
    return RingCtx(t_ctx.names[n:], t_ctx.field, t_ctx.truncation)


def _restrict_outer(series: Series, n_inner: int, out_ctx: RingCtx) -> Series:
    out = {}
    for exp, c in series.terms.items():
        out[exp[n_inner:]] = c
    return Series(out_ctx, out)


def _output_potential(x: MatrixFactorization, t: MatrixFactorization, out_ctx) -> Series:
    """Check t's potential is -w(x) + w'(y) against x's and return w'."""
    n = x.ctx.n_vars
    lifted = x.potential.relabel(t.ctx, tuple(range(n)))
    total = t.potential + lifted
    if any(any(exp[:n]) for exp in total.terms):
        raise PreconditionError("kernel potential is not of the form -w(x) + w'(y)")
    return _restrict_outer(total, n, out_ctx)


def kernel_action_complex(x: MatrixFactorization, t: MatrixFactorization) -> Z2Complex:
    """The transform reduced modulo the output maximal ideal: a 2-periodic
    complex of free modules over the inner ring with finite-length cohomology."""
    out_ctx = _split_kernel_ctx(x.ctx, t.ctx)
    _output_potential(x, t, out_ctx)
    ctx = x.ctx
    n = ctx.n_vars
    outer = range(n, t.ctx.n_vars)

    def restrict_entry(e: Series) -> Series:
        zeroed = e.set_zero(outer)
        return Series(ctx, {exp[:n]: c for exp, c in zeroed.terms.items()})

    t_phi = t.phi.map_entries(restrict_entry, ctx)
    t_psi = t.psi.map_entries(restrict_entry, ctx)
    phi_c, psi_c = _tensor_blocks(x.phi, x.psi, t_phi, t_psi, ctx, x.rank, t.rank)
    return Z2Complex(ctx, psi_c, phi_c)


def transform_mod_k_dims(x: MatrixFactorization, t: MatrixFactorization, n_max=None):
    """Exact (even, odd) k-dimensions of the cohomology of k (x) (X (x)_R T)."""
    return cohomology_over_R(kernel_action_complex(x, t), n_max)


@dataclass
class TransformResult:
    factorization: MatrixFactorization
    truncation: int
    up_to_quasi_isomorphism: bool = True


def integral_transform(
    x: MatrixFactorization, t: MatrixFactorization, truncation=None
) -> TransformResult:
    """Finite-rank representative of X (x)_R T over the output ring.

    Inner variables are truncated at the given total degree (default twice
    the source potential degree). The result satisfies its factorization
    identity exactly at any truncation, but represents the transform only up
    to quasi-isomorphism, which the flag records.
    """
    out_ctx = _split_kernel_ctx(x.ctx, t.ctx)
    w_out = _output_potential(x, t, out_ctx)
    if truncation is None:
        truncation = 2 * max(1, x.potential.total_degree())
    n = x.ctx.n_vars
    monos = monomial_basis(n, truncation)
    mono_idx = {m: i for i, m in enumerate(monos)}
    nm = len(monos)
    rx, rt = x.rank, t.rank
    field = x.ctx.field
    block_size = rx * rt * nm
    total = 2 * block_size
    even_blocks = [(0, 0), (1, 1)]
    odd_blocks = [(1, 0), (0, 1)]
    zero_out = Series.zero(out_ctx)

    def offset(blocks, xb, tb, i, j, mi):
        return blocks.index((xb, tb)) * block_size + (i * rt + j) * nm + mi

    def x_block(xb_t, xb_s):
        if (xb_t, xb_s) == (0, 1):
            return x.phi
        if (xb_t, xb_s) == (1, 0):
            return x.psi
        return None

    def t_block(tb_t, tb_s):
        if (tb_t, tb_s) == (0, 1):
            return t.phi
        if (tb_t, tb_s) == (1, 0):
            return t.psi
        return None

    def scatter(grid, t_blocks, s_blocks):
        # d = d_X (x) 1 + parity-sign (x) d_T on the ordered tensor basis
        for xb_s, tb_s in s_blocks:
            for xb_t, tb_t in t_blocks:
                xmat = x_block(xb_t, xb_s)
                if xmat is not None and tb_t == tb_s:
                    for i_t in range(rx):
                        for i_s in range(rx):
                            e = xmat.entries[i_t][i_s]
                            if e.is_zero():
                                continue
                            for mi, mono in enumerate(monos):
                                dm = sum(mono)
                                for exp, c in e.terms.items():
                                    if dm + sum(exp) > truncation:
                                        continue
                                    ti = mono_idx[tuple(a + b for a, b in zip(exp, mono))]
                                    for j in range(rt):
                                        r = offset(t_blocks, xb_t, tb_t, i_t, j, ti)
                                        s = offset(s_blocks, xb_s, tb_s, i_s, j, mi)
                                        grid[r][s] = grid[r][s] + Series.constant(out_ctx, c)
                tmat = t_block(tb_t, tb_s)
                if tmat is not None and xb_t == xb_s:
                    sign = -1 if xb_s == 1 else 1
                    for j_t in range(rt):
                        for j_s in range(rt):
                            e = tmat.entries[j_t][j_s]
                            if e.is_zero():
                                continue
                            for mi, mono in enumerate(monos):
                                dm = sum(mono)
                                for exp, c in e.terms.items():
                                    inner = tuple(a + b for a, b in zip(exp[:n], mono))
                                    if dm + sum(exp[:n]) > truncation:
                                        continue
                                    ti = mono_idx[inner]
                                    val = c if sign > 0 else field.neg(c)
                                    for i in range(rx):
                                        r = offset(t_blocks, xb_t, tb_t, i, j_t, ti)
                                        s = offset(s_blocks, xb_s, tb_s, i, j_s, mi)
                                        grid[r][s] = grid[r][s] + Series.monomial(
                                            out_ctx, exp[n:], val
                                        )

    phi_grid = [[zero_out] * total for _ in range(total)]
    psi_grid = [[zero_out] * total for _ in range(total)]
    scatter(phi_grid, even_blocks, odd_blocks)
    scatter(psi_grid, odd_blocks, even_blocks)
    mf = MatrixFactorization(
        out_ctx, w_out, RMatrix(out_ctx, phi_grid), RMatrix(out_ctx, psi_grid)
    )
    return TransformResult(mf, truncation)
