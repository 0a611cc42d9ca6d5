"""Metrics, connections, curvature and torsion on a Lie-Rinehart pair.

A metric is a degree-0, rho-symmetric, left-linear bilinear form given by
its basis matrix G_ab = G(e_a, e_b); evaluation extends it by

    G(f e_a, g e_b) = f rho(|e_a|, |g|) g G_ab.

A connection is a Christoffel table nabla_{e_a} e_b extended by

    nabla_{f u} v = f nabla_u v,
    nabla_u (g v) = a_u(g) v + rho(|u|, |g|) g nabla_u v.

Curvature and torsion follow the usual twisted formulas and are tensorial;
``check_tensoriality`` re-verifies that on random samples.  ``levi_civita``
solves the Koszul linear systems when the metric matrix is invertible over
the scalar field (or a two-sided inverse over the algebra is supplied).
"""

from __future__ import annotations

import random
from fractions import Fraction

from .coefficients import GaussianRational
from .grading import Degree
from .report import VerificationReport
from .rinehart import LieRinehartPair, PairError, Section


class KernelNonTrivial(ValueError):
    """The metric matrix is singular where a nondegenerate one is required."""


class InverseUnavailable(ValueError):
    """Metric entries are not field scalars and no inverse was supplied."""


class InverseInvalid(ValueError):
    """A supplied metric inverse fails G * Ginv = Ginv * G = identity."""


class TensorValue:
    """A covariant tensor given by its value table on basis tuples.

    Evaluation extends the table by the multilinearity rule

        T(u_1, ..., f u_i, ...) = rho(|T| + |u_1| + ... + |u_{i-1}|, |f|)
                                  f T(u_1, ..., u_i, ...)
    """

    def __init__(self, pair: LieRinehartPair, degree: Degree, valency: int, table: dict):
        self.pair = pair
        self.degree = degree
        self.valency = valency
        self.table = dict(table)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.table.values())

    def eval(self, *sections):
        if len(sections) != self.valency:
            raise PairError(f"expected {self.valency} arguments")
        pair = self.pair
        alg = pair.algebra
        factor = alg.factor
        total = alg.zero()

        def expand(idx, names, prefix_deg, coeff):
            nonlocal total
            if idx == len(sections):
                base = self.table.get(tuple(names), alg.zero())
                total = total + coeff * base
                return
            for name, c in sections[idx].terms.items():
                for dc, ch in c.homogeneous_parts().items():
                    rho = factor.rho(prefix_deg, dc)
                    expand(idx + 1, names + [name],
                           prefix_deg + dc + pair.basis_degree(name),
                           coeff * (rho * ch))
        expand(0, [], self.degree, alg.one())
        return total

    def render(self) -> str:
        items = [f"({','.join(k)}) -> {v}" for k, v in sorted(self.table.items())
                 if not v.is_zero()]
        return "{" + "; ".join(items) + "}" if items else "0"


class Metric:
    """Basis matrix of a degree-0 rho-symmetric bilinear form.

    Missing entries are filled by rho-symmetry, then by zero.  ``strict=False``
    skips degree/symmetry validation so deliberately broken metrics can be
    used as negative controls.
    """

    def __init__(self, pair: LieRinehartPair, entries: dict, strict: bool = True):
        self.pair = pair
        alg = pair.algebra
        table = {}
        for (a, b), v in entries.items():
            if a not in pair.basis_index or b not in pair.basis_index:
                raise PairError(f"metric entry ({a},{b}) names unknown sections")
            if isinstance(v, int):
                v = alg.scalar(v)
            table[(a, b)] = v
        for a in pair.basis_names:
            for b in pair.basis_names:
                if (a, b) in table:
                    continue
                if (b, a) in table:
                    # G(u,v) = rho(|u|,|v|) G(v,u)
                    rho = alg.factor.rho(pair.basis_degree(a), pair.basis_degree(b))
                    table[(a, b)] = rho * table[(b, a)]
                else:
                    table[(a, b)] = alg.zero()
        self.table = table
        if strict:
            self.validate()

    def validate(self):
        pair = self.pair
        factor = pair.algebra.factor
        for (a, b), v in self.table.items():
            if v.is_zero():
                continue
            want = pair.basis_degree(a) + pair.basis_degree(b)
            if v.degree_of() != want:
                raise PairError(
                    f"metric entry ({a},{b}) has degree {v.degree_of()}, expected {want}")
            rho = factor.rho(pair.basis_degree(a), pair.basis_degree(b))
            if v != rho * self.table[(b, a)]:
                raise PairError(f"metric not rho-symmetric at ({a},{b})")

    def entry(self, a: str, b: str):
        return self.table[(a, b)]

    def eval(self, u: Section, v: Section):
        """G(f e_a, g e_b) = f rho(|e_a|,|g|) g G_ab, summed over terms."""
        pair = self.pair
        if u.pair is not pair or v.pair is not pair:
            raise PairError("sections over a different pair")
        factor = pair.algebra.factor
        out = pair.algebra.zero()
        for a, f in u.terms.items():
            da = pair.basis_degree(a)
            for b, g in v.terms.items():
                base = self.table[(a, b)]
                if base.is_zero():
                    continue
                for dg, gh in g.homogeneous_parts().items():
                    out = out + f * (factor.rho(da, dg) * gh) * base
        return out

    def as_tensor(self) -> TensorValue:
        return TensorValue(self.pair, self.pair.algebra.group.zero(), 2, self.table)

    def scalar_matrix(self):
        """The matrix over Q(i) when every entry is a field scalar, else None."""
        names = self.pair.basis_names
        rows = []
        for a in names:
            row = []
            for b in names:
                v = self.table[(a, b)]
                if not v.is_scalar():
                    return None
                c = v.scalar_coefficient()
                if not c.is_scalar():
                    return None
                row.append(c.scalar_part())
            rows.append(row)
        return rows

    def render(self) -> str:
        items = [f"({a},{b}) -> {v}" for (a, b), v in sorted(self.table.items())
                 if not v.is_zero()]
        return "{" + "; ".join(items) + "}" if items else "0"


class Connection:
    """Christoffel table nabla_{e_a} e_b; missing entries default to zero."""

    def __init__(self, pair: LieRinehartPair, christoffel: dict | None = None):
        self.pair = pair
        self.table = {}
        christoffel = christoffel or {}
        for (a, b), v in christoffel.items():
            if a not in pair.basis_index or b not in pair.basis_index:
                raise PairError(f"connection entry ({a},{b}) names unknown sections")
            self.table[(a, b)] = v if isinstance(v, Section) else Section(pair, v)
        for a in pair.basis_names:
            for b in pair.basis_names:
                self.table.setdefault((a, b), pair.zero_section())

    def base(self, a: str, b: str) -> Section:
        return self.table[(a, b)]

    def nabla(self, u: Section, v: Section) -> Section:
        """Extend the table by left-linearity in u and the twisted Leibniz rule in v."""
        pair = self.pair
        if u.pair is not pair or v.pair is not pair:
            raise PairError("sections over a different pair")
        factor = pair.algebra.factor
        out = pair.zero_section()
        for a, f in u.terms.items():
            da = pair.basis_degree(a)
            anchor_a = pair.anchors[a]
            for b, g in v.terms.items():
                # nabla_{f e_a}(g e_b) = f a_{e_a}(g) e_b + f rho(|e_a|,|g|) g Gamma_ab
                out = out + Section(pair, {b: f * anchor_a(g)})
                for dg, gh in g.homogeneous_parts().items():
                    out = out + self.table[(a, b)].scaled(
                        f * (factor.rho(da, dg) * gh))
        return out

    def render(self) -> str:
        items = [f"({a},{b}) -> {v.render()}" for (a, b), v in sorted(self.table.items())
                 if not v.is_zero()]
        return "{" + "; ".join(items) + "}" if items else "0"


def _bihomogeneous(u: Section, v: Section, fn):
    """Sum fn(u_part, v_part, |u_part|, |v_part|) over homogeneous parts."""
    out = None
    for du, uh in u.homogeneous_parts().items():
        for dv, vh in v.homogeneous_parts().items():
            piece = fn(uh, vh, du, dv)
            out = piece if out is None else out + piece
    return out


def curvature(conn: Connection, u: Section, v: Section, w: Section) -> Section:
    """R(u,v)w = nabla_u nabla_v w - rho(|u|,|v|) nabla_v nabla_u w - nabla_{[u,v]} w."""
    pair = conn.pair
    factor = pair.algebra.factor

    def piece(uh, vh, du, dv):
        rho = factor.rho(du, dv)
        return conn.nabla(uh, conn.nabla(vh, w)) \
            - conn.nabla(vh, conn.nabla(uh, w)).scaled(rho) \
            - conn.nabla(pair.bracket(uh, vh), w)
    out = _bihomogeneous(u, v, piece)
    return out if out is not None else pair.zero_section()


def torsion(conn: Connection, u: Section, v: Section) -> Section:
    """T(u,v) = nabla_u v - rho(|u|,|v|) nabla_v u - [u,v]."""
    pair = conn.pair
    factor = pair.algebra.factor

    def piece(uh, vh, du, dv):
        rho = factor.rho(du, dv)
        return conn.nabla(uh, vh) - conn.nabla(vh, uh).scaled(rho) \
            - pair.bracket(uh, vh)
    out = _bihomogeneous(u, v, piece)
    return out if out is not None else pair.zero_section()


def covariant_derivative_metric(conn: Connection, metric: Metric,
                                u: Section, v: Section, w: Section):
    """(nabla_u G)(v,w) = a_u(G(v,w)) - G(nabla_u v, w) - rho(|u|,|v|) G(v, nabla_u w)."""
    pair = conn.pair
    factor = pair.algebra.factor
    out = pair.algebra.zero()
    for du, uh in u.homogeneous_parts().items():
        anchored = pair.anchor_of(uh)
        for dv, vh in v.homogeneous_parts().items():
            rho = factor.rho(du, dv)
            out = out + anchored(metric.eval(vh, w)) \
                - metric.eval(conn.nabla(uh, vh), w) \
                - rho * metric.eval(vh, conn.nabla(uh, w))
    return out


def metric_compatible_on_basis(conn: Connection, metric: Metric) -> VerificationReport:
    """Check nabla G = 0 on every basis triple."""
    rep = VerificationReport("metric compatibility")
    pair = conn.pair
    ok = True
    for a in pair.basis_names:
        for b in pair.basis_names:
            for c in pair.basis_names:
                val = covariant_derivative_metric(
                    conn, metric, pair.basis_section(a),
                    pair.basis_section(b), pair.basis_section(c))
                if not val.is_zero():
                    rep.failed("nabla G = 0", f"({a},{b},{c})",
                               f"(nabla_{a} G)({b},{c}) = {val}", val)
                    ok = False
    if ok:
        n = len(pair.basis_names)
        rep.passed("nabla G = 0", f"all {n}^3 basis triples")
    return rep


def check_tensoriality(conn: Connection, samples: int = 200, seed: int = 0) -> VerificationReport:
    """Verify the tensor rules of curvature and torsion on random samples:

        R(u, f v)w = rho(|u|,|f|) f R(u,v)w
        R(u, v)(f w) = rho(|u|+|v|,|f|) f R(u,v)w
        R(f u, v)w = f R(u,v)w
        T(u, f v) = rho(|u|,|f|) f T(u,v)
        T(f u, v) = f T(u,v)

    plus rho-skewsymmetry of both.
    """
    from .sampling import random_homogeneous_element, random_homogeneous_section

    rep = VerificationReport("tensoriality of curvature and torsion")
    pair = conn.pair
    alg = pair.algebra
    factor = alg.factor
    rng = random.Random(seed)
    fails = {}

    for _ in range(samples):
        u = random_homogeneous_section(pair, rng)
        v = random_homogeneous_section(pair, rng)
        w = random_homogeneous_section(pair, rng)
        f = random_homogeneous_element(alg, rng)
        du, dv, dw, df = u.degree_of(), v.degree_of(), w.degree_of(), f.degree_of()
        R = curvature(conn, u, v, w)
        T = torsion(conn, u, v)

        checks = {
            "R(u,fv)w": (curvature(conn, u, v.scaled(f), w),
                         R.scaled(f).scaled(factor.rho(du, df))),
            "R(u,v)fw": (curvature(conn, u, v, w.scaled(f)),
                         R.scaled(f).scaled(factor.rho(du + dv, df))),
            "R(fu,v)w": (curvature(conn, u.scaled(f), v, w), R.scaled(f)),
            "T(u,fv)": (torsion(conn, u, v.scaled(f)),
                        T.scaled(f).scaled(factor.rho(du, df))),
            "T(fu,v)": (torsion(conn, u.scaled(f), v), T.scaled(f)),
            "R skew": (curvature(conn, v, u, w).scaled(-factor.rho(dv, du)), R),
            "T skew": (torsion(conn, v, u).scaled(-factor.rho(dv, du)), T),
        }
        for label, (lhs, rhs) in checks.items():
            if label not in fails and lhs != rhs:
                fails[label] = (u, v, w, f, lhs - rhs)

    for label in ("R(u,fv)w", "R(u,v)fw", "R(fu,v)w", "T(u,fv)", "T(fu,v)",
                  "R skew", "T skew"):
        if label not in fails:
            rep.passed(label, f"{samples} samples")
        else:
            u, v, w, f, diff = fails[label]
            rep.failed(label,
                       f"u={u.render()}, v={v.render()}, w={w.render()}, f={f}",
                       f"defect = {diff.render()}", diff)
    return rep


def koszul_rhs(pair: LieRinehartPair, metric: Metric, a: str, b: str, c: str):
    """Right-hand side of the Koszul identity 2 G(nabla_{e_a} e_b, e_c):

        a_{e_a}(G(e_b,e_c)) + G([e_a,e_b],e_c)
        + rho(|e_a|,|e_b|+|e_c|) (a_{e_b}(G(e_c,e_a)) - G([e_b,e_c],e_a))
        - rho(|e_c|,|e_a|+|e_b|) (a_{e_c}(G(e_a,e_b)) - G([e_c,e_a],e_b))
    """
    factor = pair.algebra.factor
    ea, eb, ec = (pair.basis_section(n) for n in (a, b, c))
    da, db, dc = (pair.basis_degree(n) for n in (a, b, c))
    t1 = pair.anchor_of(ea)(metric.eval(eb, ec)) + metric.eval(pair.bracket(ea, eb), ec)
    t2 = pair.anchor_of(eb)(metric.eval(ec, ea)) - metric.eval(pair.bracket(eb, ec), ea)
    t3 = pair.anchor_of(ec)(metric.eval(ea, eb)) - metric.eval(pair.bracket(ec, ea), eb)
    return t1 + factor.rho(da, db + dc) * t2 - factor.rho(dc, da + db) * t3


def _invert_scalar_matrix(rows):
    """Exact Gauss-Jordan inverse over Q(i); None when singular."""
    n = len(rows)
    aug = [[rows[i][j] for j in range(n)] +
           [GaussianRational(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                fac = aug[r][col]
                aug[r] = [x - fac * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def levi_civita(pair: LieRinehartPair, metric: Metric,
                g_inverse: dict | None = None) -> Connection:
    """The unique torsion-free metric compatible connection via the Koszul
    linear systems 2 sum_m Gamma^m_ab G_mc = RHS(a,b,c).

    The systems are solved with a matrix inverse of G: computed internally
    when all entries are field scalars, otherwise a caller-supplied two-sided
    inverse over the algebra is required.  The returned connection is checked
    to be torsion-free and metric compatible before being handed back.
    """
    names = pair.basis_names
    alg = pair.algebra
    n = len(names)

    inv_elements = None
    scalars = metric.scalar_matrix()
    if scalars is not None:
        inv = _invert_scalar_matrix(scalars)
        if inv is None:
            raise KernelNonTrivial("metric matrix is singular over the scalar field")
        inv_elements = [[alg.scalar(inv[i][j]) for j in range(n)] for i in range(n)]
    elif g_inverse is not None:
        inv_elements = [[g_inverse[(names[i], names[j])] for j in range(n)]
                        for i in range(n)]
        ident = [[alg.one() if i == j else alg.zero() for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                left = alg.zero()
                right = alg.zero()
                for k in range(n):
                    left = left + metric.entry(names[i], names[k]) * inv_elements[k][j]
                    right = right + inv_elements[i][k] * metric.entry(names[k], names[j])
                if left != ident[i][j] or right != ident[i][j]:
                    raise InverseInvalid(
                        f"supplied inverse fails at ({names[i]},{names[j]})")
    else:
        raise InverseUnavailable(
            "metric entries are not field scalars; supply g_inverse")

    half = alg.scalar(GaussianRational(Fraction(1, 2)))
    table = {}
    for a in names:
        for b in names:
            rhs = [koszul_rhs(pair, metric, a, b, c) for c in names]
            coeffs = {}
            for m_idx, m in enumerate(names):
                total = alg.zero()
                for c_idx in range(n):
                    total = total + rhs[c_idx] * inv_elements[c_idx][m_idx]
                total = half * total
                if not total.is_zero():
                    coeffs[m] = total
            table[(a, b)] = Section(pair, coeffs)
    conn = Connection(pair, table)

    for a in names:
        for b in names:
            t = torsion(conn, pair.basis_section(a), pair.basis_section(b))
            if not t.is_zero():
                raise KernelNonTrivial(
                    f"Koszul solution is not torsion-free at ({a},{b}): {t.render()}")
    compat = metric_compatible_on_basis(conn, metric)
    if not compat.ok:
        first = compat.first_failure()
        raise KernelNonTrivial(f"Koszul solution not compatible: {first.witness}")
    return conn
