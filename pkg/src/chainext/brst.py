"""Hamiltonian-style chain extension for first-class constraint systems.

The polynomial model: even coordinates x_i, even constraints G_a with a
Poisson table closing as [G_a,G_b] = sum_c C^c_ab G_c, odd ghosts eta^a
(ghost +1) and odd antighosts P_a (antighost degree 1).  The module builds

    l1 = delta  (delta P_a = -G_a, a right derivation),
    l2 extending the longitudinal differential d f = [f, G_b] eta^b,
    l3 from the homotopy recursion,

with (l1+l2+l3)^2 = 0 exact.  The contracting homotopy is assembled from
sigma(F) = -sum_a (dF/dG_a) P_a and the monomial rescaling psi = -1/k on
combined (P,G)-degree k, giving s(F) = sum_a (dF/dG_a) P_a / k and the
projection lambda~ = 1 + delta s that kills every monomial containing a G.

Operators are materialized on the finite monomial basis of weighted degree
<= cap, where the weight adds the maximal degree jump of d per missing
ghost; the basis is closed under every operator and this is checked loudly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .complexes import GradedMap, GradedSpace, HomotopyData
from .exactla import RatMatrix, solve
from .superalg import (
    GenSpec, SuperAlgebra, SuperPoly, extend_right_derivation, mul, poisson,
    right_deriv, validate_poisson_table,
)


class ConstraintSystem:
    """m even coordinates, n even first-class constraints, ghosts, antighosts.

    poisson_table maps generator-name pairs (among x_i, G_a) to SuperPoly
    values; structure maps (a, b) with a < b (0-based) to the length-n list
    of structure functions C^c_ab, polynomials in (x, G).
    """

    __slots__ = ("m", "n", "alg", "table", "structure",
                 "xs", "gs", "etas", "ps", "_delta_vals", "_d_vals")

    def __init__(self, m, n, poisson_table, structure):
        self._delta_vals = None
        self._d_vals = None
        self.m = int(m)
        self.n = int(n)
        self.xs = ["x%d" % (i + 1) for i in range(self.m)]
        self.gs = ["G%d" % (a + 1) for a in range(self.n)]
        self.etas = ["eta%d" % (a + 1) for a in range(self.n)]
        self.ps = ["P%d" % (a + 1) for a in range(self.n)]
        gens = [GenSpec(x, "even", kind="x") for x in self.xs]
        gens += [GenSpec(g, "even", kind="G") for g in self.gs]
        gens += [GenSpec(e, "odd", ghost=1, kind="eta") for e in self.etas]
        gens += [GenSpec(p, "odd", ghost=-1, antighost=1, kind="P")
                 for p in self.ps]
        self.alg = SuperAlgebra(gens)
        self.table = dict(poisson_table)
        validate_poisson_table(self.alg, self.table)
        self.structure = {}
        onames = set(self.etas) | set(self.ps)
        for (a, b), cs in structure.items():
            if not (0 <= a < b < self.n) or len(cs) != self.n:
                raise ValueError("structure functions must be keyed by a<b "
                                 "with one entry per constraint")
            for f in cs:
                for mono in f.terms:
                    if any(self.alg.gens[i].name in onames for i in mono):
                        raise ValueError("structure functions must be "
                                         "polynomials in (x, G)")
            self.structure[(a, b)] = list(cs)
        for a in range(self.n):
            for b in range(a + 1, self.n):
                cs = self.structure.get((a, b),
                                        [SuperPoly.zero(self.alg)] * self.n)
                want = SuperPoly.zero(self.alg)
                for c in range(self.n):
                    want = want + mul(cs[c], self.gen(self.gs[c]))
                got = poisson(self.gen(self.gs[a]), self.gen(self.gs[b]),
                              self.table)
                if got != want:
                    raise ValueError(
                        "constraints are not first class: [%s,%s] does not "
                        "close on the given structure functions"
                        % (self.gs[a], self.gs[b]))

    def gen(self, name):
        return SuperPoly.gen(self.alg, name)

    def structure_fn(self, c, a, b):
        """C^c_ab with antisymmetry in (a, b), zero when absent."""
        if a == b:
            return SuperPoly.zero(self.alg)
        if a < b:
            return self.structure.get((a, b), [SuperPoly.zero(self.alg)] *
                                      self.n)[c]
        return self.structure.get((b, a), [SuperPoly.zero(self.alg)] *
                                  self.n)[c].scale(-1)

    # -- gradings -------------------------------------------------------------

    def pg_degree(self, mono):
        return sum(1 for i in mono if self.alg.gens[i].kind in ("G", "P"))

    def xgp_degree(self, mono):
        return sum(1 for i in mono if self.alg.gens[i].kind in ("x", "G", "P"))

    def ghost_degree(self, mono):
        return sum(1 for i in mono if self.alg.gens[i].kind == "eta")

    def antighost_degree(self, mono):
        return sum(1 for i in mono if self.alg.gens[i].kind == "P")

    def has_constraint_factor(self, mono):
        return any(self.alg.gens[i].kind == "G" for i in mono)


# -- the basic operators -------------------------------------------------------

def koszul_tate(sys: ConstraintSystem, f: SuperPoly) -> SuperPoly:
    """The odd right derivation with delta P_a = -G_a and zero otherwise."""
    if sys._delta_vals is None:
        sys._delta_vals = {p: sys.gen(g).scale(-1)
                           for p, g in zip(sys.ps, sys.gs)}
    return extend_right_derivation(f, sys._delta_vals, parity=1)


def longitudinal_d(sys: ConstraintSystem, f: SuperPoly) -> SuperPoly:
    """d x_i = [x_i,G_b] eta^b, d G_a = [G_a,G_b] eta^b,
    d eta^a = 1/2 C^a_cb eta^b eta^c, d P_a = 0."""
    if sys._d_vals is None:
        vals = {}
        for name in sys.xs + sys.gs:
            v = SuperPoly.zero(sys.alg)
            for b, gb in enumerate(sys.gs):
                v = v + mul(poisson(sys.gen(name), sys.gen(gb), sys.table),
                            sys.gen(sys.etas[b]))
            vals[name] = v
        for a in range(sys.n):
            v = SuperPoly.zero(sys.alg)
            for c in range(sys.n):
                for b in range(sys.n):
                    v = v + mul(mul(sys.structure_fn(a, c, b),
                                    sys.gen(sys.etas[b])),
                                sys.gen(sys.etas[c]))
            vals[sys.etas[a]] = v.scale(Fraction(1, 2))
        sys._d_vals = vals
    return extend_right_derivation(f, sys._d_vals, parity=1)


def sigma(sys: ConstraintSystem, F: SuperPoly) -> SuperPoly:
    """sigma(F) = -sum_a (d^R F / d G_a) P_a."""
    out = SuperPoly.zero(sys.alg)
    for g, p in zip(sys.gs, sys.ps):
        out = out - mul(right_deriv(F, g), sys.gen(p))
    return out


def nbar(sys: ConstraintSystem, F: SuperPoly) -> SuperPoly:
    """Multiply each monomial by its combined (P, G)-degree."""
    return SuperPoly(sys.alg, {m: c * sys.pg_degree(m)
                               for m, c in F.terms.items()})


def psi(sys: ConstraintSystem, F: SuperPoly) -> SuperPoly:
    """Monomial-wise -1/k on combined (P, G)-degree k; zero on k = 0."""
    out = {}
    for m, c in F.terms.items():
        k = sys.pg_degree(m)
        if k:
            out[m] = -c / k
    return SuperPoly(sys.alg, out)


def homotopy_s(sys: ConstraintSystem, F: SuperPoly) -> SuperPoly:
    """s = sigma . psi: monomial-wise sum_a (d^R F / d G_a) P_a / k."""
    out = SuperPoly.zero(sys.alg)
    for m, c in F.terms.items():
        k = sys.pg_degree(m)
        if not k:
            continue
        out = out + sigma(sys, SuperPoly(sys.alg, {m: -c / k}))
    return out


def lambda_tilde(sys: ConstraintSystem, f: SuperPoly) -> SuperPoly:
    """lambda~(f) = f + delta(s(f)) on antighost degree 0."""
    return f + koszul_tate(sys, homotopy_s(sys, f))


def eta_project(sys: ConstraintSystem, f: SuperPoly) -> SuperPoly:
    """Projection of an antighost-0 element onto its constraint-free part."""
    return SuperPoly(sys.alg, {m: c for m, c in f.terms.items()
                               if not sys.has_constraint_factor(m)})


# -- monomial bases ------------------------------------------------------------

def degree_jump(sys: ConstraintSystem) -> int:
    """Maximal increase of xGP-degree under d on a generator."""
    jump = 0
    for name in sys.xs + sys.gs + sys.etas:
        base = 1 if name not in sys.etas else 0
        for mono in longitudinal_d(sys, sys.gen(name)).terms:
            jump = max(jump, sys.xgp_degree(mono) - base)
    return jump


def weight(sys: ConstraintSystem, mono, jump) -> int:
    return sys.xgp_degree(mono) + jump * (sys.n - sys.ghost_degree(mono))


def monomial_basis(sys: ConstraintSystem, cap: int):
    """All normal-ordered monomials of weight <= cap, grouped by antighost
    degree; each group sorted deterministically."""
    jump = degree_jump(sys)
    evens = [sys.alg.index[x] for x in sys.xs] + \
            [sys.alg.index[g] for g in sys.gs]
    etas = [sys.alg.index[e] for e in sys.etas]
    ps = [sys.alg.index[p] for p in sys.ps]
    max_xgp = cap + jump * sys.n
    groups = [[] for _ in range(sys.n + 1)]
    for pn in range(sys.n + 1):
        for pset in combinations(ps, pn):
            for en in range(sys.n + 1):
                for eset in combinations(etas, en):
                    for ed in range(max_xgp - pn + 1):
                        for emono in combinations_with_replacement(evens, ed):
                            mono = tuple(sorted(emono + eset + pset))
                            if weight(sys, mono, jump) <= cap:
                                groups[pn].append(mono)
    for g in groups:
        g.sort()
    return groups


# -- verification of the resolution data ---------------------------------------

def verify_brst_resolution(sys: ConstraintSystem, cap: int = 4) -> dict:
    """delta^2 = 0, delta sigma + sigma delta = Nbar, lambda~ kills the
    constraint ideal, and the homotopy identity, all on the capped basis."""
    groups = monomial_basis(sys, cap)
    report = {"delta_squared": True, "nbar_identity": True,
              "lambda_tilde_kills_ideal": True, "homotopy_identity": True,
              "first_failure": None}

    def fail(key, mono):
        report[key] = False
        if report["first_failure"] is None:
            report["first_failure"] = (key, mono)

    for k, group in enumerate(groups):
        for mono in group:
            f = SuperPoly(sys.alg, {mono: 1})
            if not koszul_tate(sys, koszul_tate(sys, f)).is_zero():
                fail("delta_squared", mono)
            lhs = koszul_tate(sys, sigma(sys, f)) + \
                sigma(sys, koszul_tate(sys, f))
            if lhs != nbar(sys, f):
                fail("nbar_identity", mono)
            sf = homotopy_s(sys, f)
            if k == 0:
                if sys.has_constraint_factor(mono):
                    if not lambda_tilde(sys, f).is_zero():
                        fail("lambda_tilde_kills_ideal", mono)
                # degree 0 homotopy identity: lambda eta - 1 = l1 s
                lhs = eta_project(sys, f) - f
                if lhs != koszul_tate(sys, sf):
                    fail("homotopy_identity", mono)
            else:
                lhs = koszul_tate(sys, sf) + homotopy_s(sys, koszul_tate(sys, f))
                if lhs != f.scale(-1):
                    fail("homotopy_identity", mono)
    report["ok"] = all(report[k] for k in
                       ("delta_squared", "nbar_identity",
                        "lambda_tilde_kills_ideal", "homotopy_identity"))
    return report


def in_constraint_ideal(sys: ConstraintSystem, f: SuperPoly) -> bool:
    """Membership in the ideal generated by the constraints, decided by a
    linear solve against the ideal's monomial basis inside the span of f."""
    monos = sorted(f.terms)
    if not monos:
        return True
    target = [f.terms[m] for m in monos]
    cols = []
    for j, m in enumerate(monos):
        if sys.has_constraint_factor(m):
            col = [Fraction(0)] * len(monos)
            col[j] = Fraction(1)
            cols.append(col)
    if not cols:
        return False
    mat = RatMatrix.from_columns(cols, nrows=len(monos))
    return solve(mat, target) is not None


# -- the chain extension --------------------------------------------------------

class BRSTExtension:
    """l1 = delta, l2, l3 as memoized linear operators on SuperPoly."""

    __slots__ = ("sys", "_l2_cache", "_l3_cache")

    def __init__(self, sys):
        self.sys = sys
        self._l2_cache = {}
        self._l3_cache = {}

    def l1(self, f: SuperPoly) -> SuperPoly:
        return koszul_tate(self.sys, f)

    def _monomial_l2(self, mono):
        if mono in self._l2_cache:
            return self._l2_cache[mono]
        f = SuperPoly(self.sys.alg, {mono: 1})
        if self.sys.antighost_degree(mono) == 0:
            out = longitudinal_d(self.sys, f)
        else:
            out = homotopy_s(self.sys, self.l2(koszul_tate(self.sys, f)))
        self._l2_cache[mono] = out
        return out

    def l2(self, f: SuperPoly) -> SuperPoly:
        out = SuperPoly.zero(self.sys.alg)
        for m, c in f.terms.items():
            out = out + self._monomial_l2(m).scale(c)
        return out

    def _monomial_l3(self, mono):
        if mono in self._l3_cache:
            return self._l3_cache[mono]
        f = SuperPoly(self.sys.alg, {mono: 1})
        if self.sys.antighost_degree(mono) == 0:
            out = homotopy_s(self.sys, self.l2(self.l2(f)))
        else:
            out = homotopy_s(self.sys, self.l2(self.l2(f)) +
                             self.l3(koszul_tate(self.sys, f)))
        self._l3_cache[mono] = out
        return out

    def l3(self, f: SuperPoly) -> SuperPoly:
        out = SuperPoly.zero(self.sys.alg)
        for m, c in f.terms.items():
            out = out + self._monomial_l3(m).scale(c)
        return out

    def total(self, f: SuperPoly) -> SuperPoly:
        return self.l1(f) + self.l2(f) + self.l3(f)


def build_brst(sys: ConstraintSystem, degree_cap: int = 4) -> BRSTExtension:
    """Verify the resolution and the two ideal conditions, then return the
    extension; generator-level identities are checked before returning."""
    rep = verify_brst_resolution(sys, cap=degree_cap)
    if not rep["ok"]:
        raise ValueError("resolution data fails verification: %r"
                         % (rep["first_failure"],))
    groups = monomial_basis(sys, degree_cap)
    for mono in groups[0]:
        f = SuperPoly(sys.alg, {mono: 1})
        df = longitudinal_d(sys, f)
        if sys.has_constraint_factor(mono) and \
                not in_constraint_ideal(sys, df):
            raise ValueError("d does not preserve the constraint ideal at %s"
                             % (SuperPoly(sys.alg, {mono: 1}),))
        if not in_constraint_ideal(sys, longitudinal_d(sys, df)):
            raise ValueError("d^2 escapes the constraint ideal at %s"
                             % (SuperPoly(sys.alg, {mono: 1}),))
    ext = BRSTExtension(sys)
    for name in sys.ps + sys.etas:
        if not ext.l3(sys.gen(name)).is_zero():
            raise ValueError("l3 must vanish on %s" % (name,))
    for name in sys.xs + sys.gs + sys.etas + sys.ps:
        f = sys.gen(name)
        if not ext.total(ext.total(f)).is_zero():
            raise ValueError("total operator fails to square to zero on %s"
                             % (name,))
    return ext


def check_nilpotent_on_basis(ext: BRSTExtension, cap: int):
    """(l1+l2+l3)^2 on every basis monomial; returns the first offender."""
    groups = monomial_basis(ext.sys, cap)
    for group in groups:
        for mono in group:
            f = SuperPoly(ext.sys.alg, {mono: 1})
            if not ext.total(ext.total(f)).is_zero():
                return mono
    return None


# -- export to the generic engine ------------------------------------------------

def export_to_complexes(sys: ConstraintSystem, degree_cap: int):
    """Matrices of delta, s, eta, lambda on the capped monomial basis plus the
    l2_0 block (d on antighost 0), as engine data.

    Returns (HomotopyData, l2_0 matrix, basis groups).  Raises when an
    operator output escapes the basis, naming the escaping monomial.
    """
    groups = monomial_basis(sys, degree_cap)
    index = [{m: i for i, m in enumerate(g)} for g in groups]
    dims = [len(g) for g in groups]
    sp = GradedSpace(dims)

    def to_vec(f, k):
        v = [Fraction(0)] * dims[k]
        for m, c in f.terms.items():
            if m not in index[k]:
                raise ValueError("operator output escapes the degree-%d basis "
                                 "at monomial %s"
                                 % (k, SuperPoly(sys.alg, {m: 1})))
            v[index[k][m]] = c
        return v

    def op_matrix(op, k_from, k_to):
        cols = []
        for m in groups[k_from]:
            cols.append(to_vec(op(SuperPoly(sys.alg, {m: 1})), k_to))
        return RatMatrix.from_columns(cols, nrows=dims[k_to])

    l1_blocks = {k: op_matrix(lambda f: koszul_tate(sys, f), k, k - 1)
                 for k in range(1, sys.n + 1)}
    s_blocks = {k: op_matrix(lambda f: homotopy_s(sys, f), k, k + 1)
                for k in range(0, sys.n)}
    free = [m for m in groups[0] if not sys.has_constraint_factor(m)]
    f_dim = len(free)
    eta_cols = [[Fraction(1) if free[r] == m else Fraction(0)
                 for r in range(f_dim)] for m in groups[0]]
    eta = RatMatrix.from_columns(eta_cols, nrows=f_dim)
    lam_cols = [to_vec(SuperPoly(sys.alg, {m: 1}), 0) for m in free]
    lam = RatMatrix.from_columns(lam_cols, nrows=dims[0])
    hd = HomotopyData(sp, GradedMap(sp, -1, l1_blocks), f_dim, eta, lam,
                      GradedMap(sp, +1, s_blocks))
    l2_0 = op_matrix(lambda f: longitudinal_d(sys, f), 0, 0)
    return hd, l2_0, groups


def operator_matrix(ext: BRSTExtension, op_name: str, groups, k_from: int,
                    shift: int) -> RatMatrix:
    """Matrix of one of the extension's operators between basis groups."""
    sys = ext.sys
    op = {"l1": ext.l1, "l2": ext.l2, "l3": ext.l3}[op_name]
    k_to = k_from + shift
    if k_to < 0 or k_to >= len(groups):
        for m in groups[k_from]:
            out = op(SuperPoly(sys.alg, {m: 1}))
            if not out.is_zero():
                raise ValueError("operator output escapes the graded space "
                                 "at %s" % (SuperPoly(sys.alg, {m: 1}),))
        return RatMatrix.zeros(0, len(groups[k_from]))
    index = {m: i for i, m in enumerate(groups[k_to])}
    cols = []
    for m in groups[k_from]:
        out = op(SuperPoly(sys.alg, {m: 1}))
        v = [Fraction(0)] * len(groups[k_to])
        for mm, c in out.terms.items():
            if mm not in index:
                raise ValueError("operator output escapes the basis at %s"
                                 % (SuperPoly(sys.alg, {mm: 1}),))
            v[index[mm]] = c
        cols.append(v)
    return RatMatrix.from_columns(cols, nrows=len(groups[k_to]))


# -- shipped example systems -----------------------------------------------------

def so3_system() -> ConstraintSystem:
    """Three even constraints closing as angular momenta; constant structure
    constants, no coordinates.

    The table's polynomial values are expressed over a throwaway abelian
    system with the same generator list; algebras compare by name so the
    values carry over.
    """
    proto = ConstraintSystem(0, 3, {}, {})
    table = {("G1", "G2"): proto.gen("G3"),
             ("G2", "G3"): proto.gen("G1"),
             ("G1", "G3"): proto.gen("G2").scale(-1)}
    structure = {
        (0, 1): [SuperPoly.zero(proto.alg), SuperPoly.zero(proto.alg),
                 SuperPoly.const(proto.alg, 1)],
        (1, 2): [SuperPoly.const(proto.alg, 1), SuperPoly.zero(proto.alg),
                 SuperPoly.zero(proto.alg)],
        (0, 2): [SuperPoly.zero(proto.alg),
                 SuperPoly.const(proto.alg, -1), SuperPoly.zero(proto.alg)],
    }
    return ConstraintSystem(0, 3, table, structure)


def toy_system() -> ConstraintSystem:
    """One coordinate, two constraints, [G1,G2] = x G1, [x,G2] = 1: a
    nonconstant structure function with a nonvanishing l3."""
    proto = ConstraintSystem(1, 2, {}, {})
    table = {("G1", "G2"): mul(proto.gen("x1"), proto.gen("G1")),
             ("x1", "G2"): SuperPoly.const(proto.alg, 1)}
    structure = {(0, 1): [proto.gen("x1"), SuperPoly.zero(proto.alg)]}
    return ConstraintSystem(1, 2, table, structure)


def abelian_system(n: int = 2) -> ConstraintSystem:
    """n commuting constraints: l2 = d is a pure ghost action, l3 = 0."""
    return ConstraintSystem(0, n, {}, {})
