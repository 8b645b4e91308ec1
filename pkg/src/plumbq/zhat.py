"""Homological blocks of negative-definite plumbed 3-manifolds.

The block series is a lattice sum over a Spin^c coset: each vertex of the
plumbing tree contributes a Laurent-expansion coefficient of
(x - 1/x)^{2-deg} (or (x + 1/x)^{2-deg} for the OSp variant, or a power of
the A_{N-1} Weyl denominator for su(N)), and the lattice point contributes
q to a rational power built from -B^{-1}.  High-degree vertices have
negative powers, regularized by averaging the expansions over the two sides
(or the |W| Weyl chambers), never by a numeric limit.

An independent constant-term oracle recomputes every block by multiplying
the lattice theta function against vertex expansions built via truncated
geometric-series inversion and reading off the z-degree-zero part.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from plumbq.lie import (
    WeightVector,
    weight_inner,
    weyl_group,
    weyl_action,
    weyl_vector,
)
from plumbq.plumbing import (
    LinkingMatrix,
    PlumbingGraph,
    SpincLabel,
    coset_representatives,
    degree_delta,
    exact_inverse,
    is_negative_definite,
    linking_matrix,
    spinc_representatives,
)
from plumbq.qlaurent import QSeries

__all__ = [
    "ZhatBlock",
    "vertex_factor_su2",
    "vertex_factor_osp",
    "vertex_factor_suN",
    "delta_b",
    "zhat_block",
    "zhat_all_blocks",
    "constant_term_oracle",
    "block_to_json",
]

VARIANTS = ("su2", "so3", "osp12", "su3")


@dataclass(frozen=True)
class ZhatBlock:
    label: tuple
    delta_b: Fraction
    series: QSeries
    variant: str
    normalization_denominator: int


# ---------------------------------------------------------------------------
# vertex expansions, rank 1


def _binom(n: int, k: int) -> int:
    return math.comb(n, k)


def vertex_factor_su2(deg: int, max_abs_exp: int) -> dict[int, Fraction]:
    """Two-sided expansion coefficients of (x - 1/x)^{2-deg}.

    For deg <= 2 this is the plain Laurent polynomial; for deg >= 3 it is
    the sum of the expansions at x -> infinity and x -> 0, truncated to
    |exponent| <= max_abs_exp.
    """
    if deg < 0:
        raise ValueError("degree must be nonnegative")
    out: dict[int, Fraction] = {}
    p = 2 - deg
    if p >= 0:
        for i in range(p + 1):
            out[p - 2 * i] = Fraction((-1) ** i * _binom(p, i))
        return out
    k = deg - 2
    j = 0
    while k + 2 * j <= max_abs_exp:
        c = Fraction(_binom(k - 1 + j, j))
        out[-(k + 2 * j)] = out.get(-(k + 2 * j), Fraction(0)) + c
        out[k + 2 * j] = out.get(k + 2 * j, Fraction(0)) + (-1) ** k * c
        j += 1
    return {e: c for e, c in out.items() if c != 0}


def vertex_factor_osp(deg: int, max_abs_exp: int) -> dict[int, Fraction]:
    """Same construction for (x + 1/x)^{2-deg}."""
    if deg < 0:
        raise ValueError("degree must be nonnegative")
    out: dict[int, Fraction] = {}
    p = 2 - deg
    if p >= 0:
        for i in range(p + 1):
            out[p - 2 * i] = Fraction(_binom(p, i))
        return out
    k = deg - 2
    j = 0
    while k + 2 * j <= max_abs_exp:
        c = Fraction((-1) ** j * _binom(k - 1 + j, j))
        out[-(k + 2 * j)] = out.get(-(k + 2 * j), Fraction(0)) + c
        out[k + 2 * j] = out.get(k + 2 * j, Fraction(0)) + c
        j += 1
    return {e: c for e, c in out.items() if c != 0}


def _avg_rank1(deg: int, max_abs_exp: int, osp: bool) -> dict[int, Fraction]:
    """Chamber-averaged coefficients: halves the two-sided sum for deg >= 3."""
    raw = (vertex_factor_osp if osp else vertex_factor_su2)(deg, max_abs_exp)
    if deg <= 2:
        return raw
    return {e: c / 2 for e, c in raw.items()}


# ---------------------------------------------------------------------------
# vertex expansions, A_{N-1}


def _weight_key(v: WeightVector) -> tuple:
    return tuple(v.coords)


def vertex_factor_suN(deg: int, N: int, bound: Fraction) -> dict[tuple, Fraction]:
    """Chamber-summed expansion coefficients of (Weyl denominator)^{2-deg}.

    Keys are fundamental-weight coordinates; values are the sums over the
    |W| chamber expansions (so the block assembly divides by |W| per
    vertex).  Only weights mu with (mu, mu) <= bound are returned.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    avg = _sun_chamber_average(deg, N, Fraction(bound))
    W = weyl_group(N)
    return {k: c * len(W) for k, c in avg.items()}


def _sun_chamber_average(deg: int, N: int, bound: Fraction) -> dict[tuple, Fraction]:
    """Average over Weyl chambers of the expansion of Delta^{2-deg}."""
    W = weyl_group(N)
    rho = weyl_vector(N)
    p = 2 - deg
    total: dict[tuple, Fraction] = {}
    for wi in W:
        one = _sun_single_chamber(deg, N, bound, wi, W, rho, p)
        for k, c in one.items():
            total[k] = total.get(k, Fraction(0)) + c
    nW = Fraction(1, len(W))
    return {k: c * nW for k, c in total.items() if c != 0}


def _sun_single_chamber(deg, N, bound, wi, W, rho, p) -> dict[tuple, Fraction]:
    """Expansion of Delta^p in the chamber where x^{wi(rho)} dominates.

    Delta = sign(wi) x^{wi(rho)} (1 + U) with U a sum over the other Weyl
    elements; (1+U)^p is expanded in the height grading h(mu) =
    -(mu, wi(rho)), in which every U monomial has positive height.
    """
    base = wi.sign  # sign(wi)^p depends on parity of p
    chamber_rho = weyl_action(wi, rho)
    sign_pref = Fraction(wi.sign ** (p % 2))
    base_wt = chamber_rho.scale(p)
    # height cutoff: any target weight mu with (mu,mu) <= bound satisfies
    # h(mu - base_wt) <= |mu||rho| + |p|(rho,rho)
    rr = weight_inner(rho, rho)
    hmax = int(math.isqrt(int(math.ceil(float(bound * rr))))) + int(abs(p) * rr) + 2
    # U as dict over (weight delta relative to the chamber leader) -> coeff,
    # graded by height
    U: dict[tuple, Fraction] = {}
    for w in W:
        if w.perm == wi.perm:
            continue
        delta = weyl_action(w, rho) - chamber_rho
        h = -weight_inner(delta, chamber_rho)
        assert h > 0
        if h <= hmax:
            U[_weight_key(delta)] = Fraction(w.sign * wi.sign)

    def mul(a: dict, b: dict) -> dict:
        out: dict[tuple, Fraction] = {}
        for ka, ca in a.items():
            wa = WeightVector.make(N, ka)
            for kb, cb in b.items():
                wk = wa + WeightVector.make(N, kb)
                h = -weight_inner(wk, chamber_rho)
                if h > hmax:
                    continue
                key = _weight_key(wk)
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return {k: c for k, c in out.items() if c != 0}

    one = {_weight_key(WeightVector.make(N, [0] * (N - 1))): Fraction(1)}
    if p >= 0:
        # finite binomial expansion of (1 + U)^p
        series = dict(one)
        upow = dict(one)
        for j in range(1, p + 1):
            upow = mul(upow, U)
            for k, c in upow.items():
                series[k] = series.get(k, Fraction(0)) + c * _binom(p, j)
    else:
        # Neumann series for (1+U)^{-1}, then raise to the k-th power
        inv = dict(one)
        upow = dict(one)
        j = 1
        while True:
            upow = mul(upow, U)
            if not upow:
                break
            for k, c in upow.items():
                inv[k] = inv.get(k, Fraction(0)) + (-1) ** j * c
            j += 1
            if j > hmax:
                break
        series = dict(one)
        for _ in range(-p):
            series = mul(series, inv)
    # attach the chamber leader monomial and filter by the norm bound
    out: dict[tuple, Fraction] = {}
    for k, c in series.items():
        mu = WeightVector.make(N, k) + base_wt
        if weight_inner(mu, mu) <= bound:
            key = _weight_key(mu)
            out[key] = out.get(key, Fraction(0)) + c * sign_pref
    return {k: c for k, c in out.items() if c != 0}


# ---------------------------------------------------------------------------
# lattice enumeration


def _ldl(A: list[list[Fraction]]):
    """Q(x) = sum_i d[i] (x_i + sum_{j>i} U[i][j] x_j)^2 for posdef A."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    d = [Fraction(0)] * n
    U = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = M[i][i]
        assert d[i] > 0, "quadratic form is not positive definite"
        for j in range(i + 1, n):
            U[i][j] = M[i][j] / d[i]
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                M[r][c] -= M[r][i] * M[i][c] / d[i]
    return d, U


def ellipsoid_points(A, center, R: Fraction):
    """Integer vectors x with (x+center)^T A (x+center) <= R (A posdef).

    Fincke-Pohst style recursive enumeration with exact rational arithmetic
    at the acceptance check and float square roots (with a safety margin)
    only for the loop bounds.
    """
    n = len(A)
    d, U = _ldl([[Fraction(x) for x in row] for row in A])
    center = [Fraction(c) for c in center]
    R = Fraction(R)
    out = []
    x = [0] * n

    def rec(i: int, remaining: Fraction):
        if i < 0:
            out.append(tuple(x))
            return
        # y_i = x_i + center_i + sum_{j>i} U[i][j] (x_j + center_j)
        off = center[i] + sum(U[i][j] * (x[j] + center[j]) for j in range(i + 1, n))
        lim = float(remaining / d[i]) ** 0.5 + 1e-9
        lo = math.ceil(-lim - float(off))
        hi = math.floor(lim - float(off))
        for xi in range(lo - 1, hi + 2):
            y = xi + off
            consumed = d[i] * y * y
            if consumed <= remaining:
                x[i] = xi
                rec(i - 1, remaining - consumed)
        x[i] = 0

    rec(n - 1, R)
    return out


# ---------------------------------------------------------------------------
# block assembly, rank 1


def _prefactor_exponent(g: PlumbingGraph) -> Fraction:
    L = len(g)
    sf = sum(f for _, f in g.vertices)
    return Fraction(-(3 * L + sf), 4)


def delta_b(lm: LinkingMatrix, b, framings=None) -> Fraction:
    """Least possible exponent of block b: prefactor + min of the lattice form."""
    if not is_negative_definite(lm):
        raise ValueError("linking matrix must be negative definite")
    n = lm.size
    fr = [lm.B[i][i] for i in range(n)]
    pref = Fraction(-(3 * n + sum(fr)), 4)
    Binv = lm.inverse()
    # minimize t^T(-B)t with t = m + B^{-1} b / 2 over integer m
    center = [sum(Binv[i][j] * b[j] for j in range(n)) / 2 for i in range(n)]
    A = [[-Fraction(lm.B[i][j]) for j in range(n)] for i in range(n)]
    R = Fraction(1)
    while True:
        pts = ellipsoid_points(A, center, R)
        if pts:
            break
        R *= 4
    best = None
    for m in pts:
        t = [m[i] + center[i] for i in range(n)]
        q = sum(A[i][j] * t[i] * t[j] for i in range(n) for j in range(n))
        if best is None or q < best:
            best = q
    return pref + best


def _rank1_supports(g: PlumbingGraph, lm: LinkingMatrix, R: Fraction, osp: bool):
    """Per-vertex coefficient dicts truncated by the norm bound."""
    sup = []
    for idx, vid in enumerate(g.ids):
        deg = g.degree(vid)
        fv = -lm.B[idx][idx]
        max_abs = int(math.isqrt(int(4 * R * fv))) + 2
        sup.append(_avg_rank1(deg, max_abs, osp))
    return sup


def zhat_block(
    g: PlumbingGraph, b, variant: str, order
) -> ZhatBlock:
    """One homological block, truncated at exponent prefactor + order."""
    variant = variant.lower()
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "su3":
        return _zhat_block_suN(g, b, 3, order)
    lm = linking_matrix(g)
    if not is_negative_definite(lm):
        raise ValueError("linking matrix must be negative definite")
    R = Fraction(order)
    pref = _prefactor_exponent(g)
    db = delta_b(lm, tuple(b), None)
    if pref + R <= db:
        raise ValueError("order does not reach past delta_b")
    osp = variant == "osp12"
    sup = _rank1_supports(g, lm, R, osp)
    n = lm.size
    Binv = lm.inverse()
    denom = math.lcm(4 * abs(lm.det()), pref.denominator)
    terms: dict[Fraction, Fraction] = {}
    for ell in itertools.product(*[sorted(s) for s in sup]):
        # coset membership: (ell - b)/2 in B Z^L
        ok = True
        for i in range(n):
            val = sum(Binv[i][j] * (ell[j] - b[j]) for j in range(n))
            if (val / 2).denominator != 1:
                ok = False
                break
        if not ok:
            continue
        qexp = -sum(
            Binv[i][j] * ell[i] * ell[j] for i in range(n) for j in range(n)
        ) / 4
        if qexp >= R:
            continue
        coeff = Fraction(1)
        for i in range(n):
            coeff *= sup[i][ell[i]]
        e = pref + qexp
        terms[e] = terms.get(e, Fraction(0)) + coeff
    series = QSeries.from_terms(terms, denom=denom, trunc=pref + R)
    c = sum(1 for vid in g.ids if g.degree(vid) >= 3)
    return ZhatBlock(tuple(b), db, series, variant, 2 ** c)


def zhat_all_blocks(g: PlumbingGraph, variant: str, order) -> list[ZhatBlock]:
    variant = variant.lower()
    if variant == "su3":
        return _zhat_all_blocks_suN(g, 3, order)
    lm = linking_matrix(g)
    _, delta = degree_delta(g)
    labels = spinc_representatives(lm, delta)
    return [zhat_block(g, lab.b, variant, order) for lab in labels]


# ---------------------------------------------------------------------------
# block assembly, su(N)


def _sun_prefactor(g: PlumbingGraph, N: int) -> Fraction:
    L = len(g)
    trB = sum(f for _, f in g.vertices)
    rr = Fraction(N * (N * N - 1), 12)
    return -Fraction(3 * L + trB) * rr / 2


def _root_gram(N: int) -> list[list[Fraction]]:
    """Gram matrix of the simple roots (the Cartan matrix for A_{N-1})."""
    r = N - 1
    G = [[Fraction(0)] * r for _ in range(r)]
    for i in range(r):
        G[i][i] = Fraction(2)
        if i + 1 < r:
            G[i][i + 1] = G[i + 1][i] = Fraction(-1)
    return G


def _fund_to_root(N: int, coords) -> list[Fraction]:
    """Convert fundamental-weight coordinates to simple-root coordinates."""
    # root coords c solve  C^T c = n  with C the Cartan matrix (symmetric)
    r = N - 1
    G = _root_gram(N)
    Ginv = exact_inverse(G)
    return [sum(Ginv[i][j] * Fraction(coords[j]) for j in range(r)) for i in range(r)]


def sun_block_labels(g: PlumbingGraph, N: int) -> list[tuple]:
    """Coset labels b in (Q^L + delta)/B Q^L, delta_v = (2 - deg v) rho.

    Each label is an L-tuple of fundamental-weight coordinate tuples.
    """
    lm = linking_matrix(g)
    n = lm.size
    r = N - 1
    reps = coset_representatives([list(row) for row in lm.B])
    base = []
    for vid in g.ids:
        p = 2 - g.degree(vid)
        base.append(tuple(Fraction(p) for _ in range(r)))  # p * rho
    labels = []
    for combo in itertools.product(reps, repeat=r):
        # combo[a][v] shifts root coordinate a at vertex v; convert the
        # root-basis shift to fundamental-weight coordinates via the Gram
        G = _root_gram(N)
        label = []
        for v in range(n):
            shift = [
                sum(G[a][i] * combo[i][v] for i in range(r)) for a in range(r)
            ]
            label.append(tuple(base[v][a] + shift[a] for a in range(r)))
        labels.append(tuple(label))
    return labels


def _zhat_block_suN(g: PlumbingGraph, b, N: int, order) -> ZhatBlock:
    lm = linking_matrix(g)
    if not is_negative_definite(lm):
        raise ValueError("linking matrix must be negative definite")
    n = lm.size
    r = N - 1
    R = Fraction(order)
    pref = _sun_prefactor(g, N)
    G = _root_gram(N)
    # quadratic form over t in the root-coordinate tensor space:
    # exponent = (1/2) t^T ((-B) (x) G) t
    dim = n * r
    A = [[Fraction(0)] * dim for _ in range(dim)]
    for v in range(n):
        for w in range(n):
            for a in range(r):
                for c in range(r):
                    A[v * r + a][w * r + c] = Fraction(-lm.B[v][w]) * G[a][c] / 2
    # center: s = (B (x) I) t with t = m + center reproduces s = b at m = 0
    Binv = lm.inverse()
    b_root = [_fund_to_root(N, bv) for bv in b]
    center = [
        sum(Binv[v][w] * b_root[w][a] for w in range(n))
        for v in range(n)
        for a in range(r)
    ]
    # vertex expansions, one per distinct degree
    maxf = max(-lm.B[i][i] for i in range(n))
    normbound = 2 * R * maxf
    expansions = {}
    for vid in g.ids:
        deg = g.degree(vid)
        if deg not in expansions:
            expansions[deg] = _sun_chamber_average(deg, N, normbound)
    denom_guess = math.lcm(2 * N * abs(lm.det()), pref.denominator, 12)
    terms: dict[Fraction, Fraction] = {}
    best_exp = None
    for m in ellipsoid_points(A, center, R):
        t = [m[i] + center[i] for i in range(dim)]
        qexp = sum(
            A[i][j] * t[i] * t[j] for i in range(dim) for j in range(dim)
        )
        if qexp >= R:
            continue
        # s_v = sum_w B_vw t_w in root coords; convert to weight coords
        coeff = Fraction(1)
        for v in range(n):
            s_root = [
                sum(Fraction(lm.B[v][w]) * t[w * r + a] for w in range(n))
                for a in range(r)
            ]
            # weight coords: n_a = sum_c G[a][c] * c_root_c
            s_fund = tuple(
                sum(G[a][c] * s_root[c] for c in range(r)) for a in range(r)
            )
            fac = expansions[g.degree(g.ids[v])].get(s_fund, Fraction(0))
            if fac == 0:
                coeff = Fraction(0)
                break
            coeff *= fac
        if coeff == 0:
            continue
        if best_exp is None or qexp < best_exp:
            best_exp = qexp
        e = pref + qexp
        terms[e] = terms.get(e, Fraction(0)) + coeff
    denom = denom_guess
    for e in terms:
        denom = math.lcm(denom, e.denominator)
    series = QSeries.from_terms(terms, denom=denom, trunc=pref + R)
    db = pref if best_exp is None else pref + best_exp
    W_size = math.factorial(N)
    return ZhatBlock(tuple(b), db, series, "su3" if N == 3 else f"su{N}",
                     W_size ** n)


def _zhat_all_blocks_suN(g: PlumbingGraph, N: int, order) -> list[ZhatBlock]:
    return [_zhat_block_suN(g, b, N, order) for b in sun_block_labels(g, N)]


# ---------------------------------------------------------------------------
# constant-term oracle


def _series_inverse_tail(poly: dict[int, int], side: str, max_abs: int) -> dict[int, Fraction]:
    """Expansion of 1/poly at x -> infinity ('inf') or x -> 0 ('zero').

    poly is a Laurent polynomial with integer exponents.  The leading term
    on the chosen side is factored out and the rest inverted by a truncated
    Neumann series, a deliberately different route from the closed-form
    binomial coefficients used by the lattice method.
    """
    if side == "inf":
        lead = max(poly)
    else:
        lead = min(poly)
    lc = poly[lead]
    # w = (poly / (lc x^lead)) - 1, supported on the decaying side
    w = {}
    for e, c in poly.items():
        if e == lead:
            continue
        w[e - lead] = Fraction(c, lc)
    out = {0: Fraction(1)}
    term = {0: Fraction(1)}
    span = 2 * max_abs + 2 * abs(lead) + 4
    for _ in range(span):
        nxt: dict[int, Fraction] = {}
        for e1, c1 in term.items():
            for e2, c2 in w.items():
                e = e1 + e2
                if abs(e) > span:
                    continue
                nxt[e] = nxt.get(e, Fraction(0)) - c1 * c2
        term = nxt
        if not term:
            break
        for e, c in term.items():
            out[e] = out.get(e, Fraction(0)) + c
    return {e - lead: Fraction(c, lc) for e, c in out.items()}


def _poly_pow(base: dict[int, int], k: int) -> dict[int, int]:
    out = {0: 1}
    for _ in range(k):
        nxt: dict[int, int] = {}
        for e1, c1 in out.items():
            for e2, c2 in base.items():
                nxt[e1 + e2] = nxt.get(e1 + e2, 0) + c1 * c2
        out = {e: c for e, c in nxt.items() if c != 0}
    return out


def _oracle_vertex_rank1(deg: int, max_abs: int, osp: bool) -> dict[int, Fraction]:
    """Vertex expansion via polynomial powering + Neumann inversion."""
    sign = 1 if osp else -1
    base = {1: 1, -1: sign}  # x + sign/x
    p = 2 - deg
    if p >= 0:
        return {e: Fraction(c) for e, c in _poly_pow(base, p).items()}
    poly = _poly_pow(base, -p)
    up = _series_inverse_tail(poly, "inf", max_abs)
    down = _series_inverse_tail(poly, "zero", max_abs)
    out: dict[int, Fraction] = {}
    for src in (up, down):
        for e, c in src.items():
            if abs(e) <= max_abs:
                out[e] = out.get(e, Fraction(0)) + c / 2
    return {e: c for e, c in out.items() if c != 0}


def constant_term_oracle(g: PlumbingGraph, b, variant: str, order) -> QSeries:
    """Block series recomputed as a theta-function constant term."""
    variant = variant.lower()
    if variant == "su3":
        return _oracle_suN(g, b, 3, order)
    lm = linking_matrix(g)
    if not is_negative_definite(lm):
        raise ValueError("linking matrix must be negative definite")
    n = lm.size
    R = Fraction(order)
    pref = _prefactor_exponent(g)
    Binv = lm.inverse()
    osp = variant == "osp12"
    # vertex expansions via the independent inversion route
    sup = []
    for idx, vid in enumerate(g.ids):
        deg = g.degree(vid)
        fv = -lm.B[idx][idx]
        max_abs = int(math.isqrt(int(4 * R * fv))) + 2
        sup.append(_oracle_vertex_rank1(deg, max_abs, osp))
    # enumerate the theta lattice: ell = b + 2 B m
    center = [sum(Binv[i][j] * b[j] for j in range(n)) / 2 for i in range(n)]
    A = [[-Fraction(lm.B[i][j]) for j in range(n)] for i in range(n)]
    denom = math.lcm(4 * abs(lm.det()), pref.denominator)
    terms: dict[Fraction, Fraction] = {}
    for m in ellipsoid_points(A, center, R):
        t = [m[i] + center[i] for i in range(n)]
        qexp = sum(A[i][j] * t[i] * t[j] for i in range(n) for j in range(n))
        if qexp >= R:
            continue
        ell = [b[i] + 2 * sum(lm.B[i][j] * m[j] for j in range(n)) for i in range(n)]
        # z-degree-zero pairing: theta contributes z^ell, so we need the
        # coefficient of z^{-ell} in the vertex product
        coeff = Fraction(1)
        for i in range(n):
            fac = sup[i].get(-ell[i], Fraction(0))
            if fac == 0:
                coeff = Fraction(0)
                break
            coeff *= fac
        if coeff == 0:
            continue
        e = pref + qexp
        terms[e] = terms.get(e, Fraction(0)) + coeff
    return QSeries.from_terms(terms, denom=denom, trunc=pref + R)


def _oracle_suN(g: PlumbingGraph, b, N: int, order) -> QSeries:
    """su(N) constant term: same lattice walk, alternate vertex expansions.

    Chamber expansions are computed by inverting the full polynomial
    Delta^{deg-2} with a Neumann series per chamber (invert-then-nothing),
    rather than the invert-Delta-then-power route of the block assembly.
    """
    lm = linking_matrix(g)
    n = lm.size
    r = N - 1
    R = Fraction(order)
    pref = _sun_prefactor(g, N)
    G = _root_gram(N)
    dim = n * r
    A = [[Fraction(0)] * dim for _ in range(dim)]
    for v in range(n):
        for w in range(n):
            for a in range(r):
                for c in range(r):
                    A[v * r + a][w * r + c] = Fraction(-lm.B[v][w]) * G[a][c] / 2
    Binv = lm.inverse()
    b_root = [_fund_to_root(N, bv) for bv in b]
    center = [
        sum(Binv[v][w] * b_root[w][a] for w in range(n))
        for v in range(n)
        for a in range(r)
    ]
    maxf = max(-lm.B[i][i] for i in range(n))
    normbound = 2 * R * maxf
    expansions = {}
    for vid in g.ids:
        deg = g.degree(vid)
        if deg not in expansions:
            expansions[deg] = _oracle_vertex_suN(deg, N, normbound)
    terms: dict[Fraction, Fraction] = {}
    denom = math.lcm(2 * N * abs(lm.det()), pref.denominator, 12)
    for m in ellipsoid_points(A, center, R):
        t = [m[i] + center[i] for i in range(dim)]
        qexp = sum(A[i][j] * t[i] * t[j] for i in range(dim) for j in range(dim))
        if qexp >= R:
            continue
        coeff = Fraction(1)
        for v in range(n):
            s_root = [
                sum(Fraction(lm.B[v][w]) * t[w * r + a] for w in range(n))
                for a in range(r)
            ]
            s_fund = tuple(
                sum(G[a][c] * s_root[c] for c in range(r)) for a in range(r)
            )
            fac = expansions[g.degree(g.ids[v])].get(s_fund, Fraction(0))
            if fac == 0:
                coeff = Fraction(0)
                break
            coeff *= fac
        if coeff == 0:
            continue
        e = pref + qexp
        terms[e] = terms.get(e, Fraction(0)) + coeff
        denom = math.lcm(denom, e.denominator)
    return QSeries.from_terms(terms, denom=denom, trunc=pref + R)


def _oracle_vertex_suN(deg: int, N: int, bound: Fraction) -> dict[tuple, Fraction]:
    """Chamber-averaged Delta^{2-deg} by direct polynomial inversion."""
    W = weyl_group(N)
    rho = weyl_vector(N)
    p = 2 - deg
    # Delta as a polynomial in weight space
    delta_poly: dict[tuple, int] = {}
    for w in W:
        key = _weight_key(weyl_action(w, rho))
        delta_poly[key] = delta_poly.get(key, 0) + w.sign

    def wmul(a: dict, b: dict, hcap=None, hfun=None) -> dict:
        out: dict[tuple, Fraction] = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                wk = WeightVector.make(N, ka) + WeightVector.make(N, kb)
                if hcap is not None and hfun(wk) > hcap:
                    continue
                key = _weight_key(wk)
                out[key] = out.get(key, Fraction(0)) + Fraction(ca) * Fraction(cb)
        return {k: c for k, c in out.items() if c != 0}

    if p >= 0:
        poly = {_weight_key(WeightVector.make(N, [0] * (N - 1))): Fraction(1)}
        for _ in range(p):
            poly = wmul(poly, delta_poly)
        return {
            k: c
            for k, c in poly.items()
            if weight_inner(WeightVector.make(N, k), WeightVector.make(N, k)) <= bound
        }
    k_pow = -p
    rr = weight_inner(rho, rho)
    total: dict[tuple, Fraction] = {}
    for wi in W:
        chamber_rho = weyl_action(wi, rho)

        def height(wk, cr=chamber_rho):
            return -weight_inner(wk, cr)

        hmax = int(math.isqrt(int(math.ceil(float(bound * rr))))) + int(k_pow * rr) + 2
        # Delta^{k} as polynomial, then invert by Neumann series around the
        # chamber-leading monomial of Delta^{k}
        dk: dict[tuple, Fraction] = {_weight_key(WeightVector.make(N, [0] * (N - 1))): Fraction(1)}
        for _ in range(k_pow):
            dk = wmul(dk, delta_poly)
        lead_key = max(
            dk, key=lambda kk: weight_inner(WeightVector.make(N, kk), chamber_rho)
        )
        lead_wt = WeightVector.make(N, lead_key)
        lc = dk[lead_key]
        w_tail: dict[tuple, Fraction] = {}
        for kk, cc in dk.items():
            if kk == lead_key:
                continue
            delta = WeightVector.make(N, kk) - lead_wt
            if height(delta) <= hmax:
                w_tail[_weight_key(delta)] = cc / lc
        inv = {_weight_key(WeightVector.make(N, [0] * (N - 1))): Fraction(1)}
        term = {_weight_key(WeightVector.make(N, [0] * (N - 1))): Fraction(1)}
        while True:
            term = wmul(
                {k2: -c2 for k2, c2 in term.items()}, w_tail, hcap=hmax, hfun=height
            )
            if not term:
                break
            for kk, cc in term.items():
                inv[kk] = inv.get(kk, Fraction(0)) + cc
        for kk, cc in inv.items():
            mu = WeightVector.make(N, kk) - lead_wt
            if weight_inner(mu, mu) <= bound:
                key = _weight_key(mu)
                total[key] = total.get(key, Fraction(0)) + cc / lc
    nW = Fraction(1, len(W))
    return {k: c * nW for k, c in total.items() if c != 0}


def block_to_json(block: ZhatBlock) -> dict:
    from plumbq.qlaurent import qs_to_json

    return {
        "b": [str(x) for x in block.label],
        "delta": str(block.delta_b),
        "normalization": f"1/{block.normalization_denominator}",
        "variant": block.variant,
        "series": qs_to_json(block.series),
    }
