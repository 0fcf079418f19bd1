"""Graded complexes, contracting homotopies, and three-term chain extensions.

The central construction: given a resolution (X_*, l1) of F with a contracting
homotopy (eta, lam, s) satisfying

    eta . lam = 1        and        lam . eta - 1 = l1 s + s l1   (all degrees),

and a degree-zero operator l2_0 on X_0 such that

    (i)   eta . l2_0 . lam equals the differential supplied on F (when given),
    (ii)  l2_0 maps B = l1(X_1) into itself,
    (iii) l2_0 . l2_0 maps X_0 into B,

`chain_extend` produces maps l2 (degree 0) and l3 (degree +1) with

    (l1 + l2 + l3)^2 = 0,    l2 = 0 in degrees > 1,    l3 = 0 in degrees > 0.

Everything is exact over Q and bit-for-bit deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .exactla import RatMatrix, rank, solve


class GradedSpace:
    """Finite graded vector space over Q, degrees 0..top, given by dimensions."""

    __slots__ = ("dims",)

    def __init__(self, dims):
        dims = tuple(int(d) for d in dims)
        if any(d < 0 for d in dims):
            raise ValueError("negative dimension")
        self.dims = dims

    @property
    def top(self):
        return len(self.dims) - 1

    def dim(self, k):
        if 0 <= k < len(self.dims):
            return self.dims[k]
        return 0

    @property
    def total_dim(self):
        return sum(self.dims)

    def offset(self, k):
        """Start of degree k in the concatenated basis ordering."""
        return sum(self.dims[:k])

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.dims == other.dims

    def __repr__(self):
        return "GradedSpace(dims=%r)" % (self.dims,)


class GradedMap:
    """Degree-homogeneous linear map X_k -> X_{k+shift}, one block per degree.

    Blocks are indexed by source degree; a missing block is zero.  Blocks whose
    source or target component is zero-dimensional may be omitted entirely.
    """

    __slots__ = ("space", "shift", "blocks")

    def __init__(self, space, shift, blocks=None):
        self.space = space
        self.shift = int(shift)
        clean = {}
        for k, m in (blocks or {}).items():
            k = int(k)
            want = (space.dim(k + self.shift), space.dim(k))
            if m.shape != want:
                raise ValueError("block %d has shape %s, expected %s" % (k, m.shape, want))
            clean[k] = m
        self.blocks = clean

    def block(self, k) -> RatMatrix:
        if k in self.blocks:
            return self.blocks[k]
        return RatMatrix.zeros(self.space.dim(k + self.shift), self.space.dim(k))

    def compose(self, other) -> "GradedMap":
        """self after other (self . other)."""
        if self.space != other.space:
            raise ValueError("graded maps live on different spaces")
        out = {}
        for k in range(len(self.space.dims)):
            m = self.block(k + other.shift) @ other.block(k)
            if not m.is_zero():
                out[k] = m
        return GradedMap(self.space, self.shift + other.shift, out)

    def add(self, other) -> "GradedMap":
        if self.shift != other.shift or self.space != other.space:
            raise ValueError("cannot add graded maps of different shifts")
        out = {}
        for k in set(self.blocks) | set(other.blocks):
            m = self.block(k) + other.block(k)
            if not m.is_zero():
                out[k] = m
        return GradedMap(self.space, self.shift, out)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.blocks.values())

    def total_matrix(self) -> RatMatrix:
        """The map as one matrix on the concatenated basis of all degrees."""
        n = self.space.total_dim
        rows = [[Fraction(0)] * n for _ in range(n)]
        for k in range(len(self.space.dims)):
            tgt = k + self.shift
            if not (0 <= tgt < len(self.space.dims)):
                continue
            blk = self.block(k)
            ro, co = self.space.offset(tgt), self.space.offset(k)
            for i in range(blk.nrows):
                for j in range(blk.ncols):
                    rows[ro + i][co + j] = blk.rows[i][j]
        return RatMatrix(rows, ncols=n)


class HomotopyData:
    """A resolution of F with its contracting homotopy.

    l1: degree -1 map on `space`; eta: X_0 -> F; lam: F -> X_0;
    s: degree +1 map.  `verify_homotopy` checks the defining identities.
    """

    __slots__ = ("space", "l1", "f_dim", "eta", "lam", "s")

    def __init__(self, space, l1, f_dim, eta, lam, s):
        if l1.shift != -1:
            raise ValueError("l1 must have degree -1")
        if s.shift != +1:
            raise ValueError("s must have degree +1")
        f_dim = int(f_dim)
        if eta.shape != (f_dim, space.dim(0)):
            raise ValueError("eta has shape %s, expected %s" % (eta.shape, (f_dim, space.dim(0))))
        if lam.shape != (space.dim(0), f_dim):
            raise ValueError("lam has shape %s, expected %s" % (lam.shape, (space.dim(0), f_dim)))
        self.space = space
        self.l1 = l1
        self.f_dim = f_dim
        self.eta = eta
        self.lam = lam
        self.s = s


class ChainExtension:
    """The output of chain_extend: l1, l2, l3 with nilpotent sum."""

    __slots__ = ("space", "l1", "l2", "l3")

    def __init__(self, space, l1, l2, l3):
        if l1.shift != -1 or l2.shift != 0 or l3.shift != +1:
            raise ValueError("degree shifts must be (-1, 0, +1)")
        self.space = space
        self.l1 = l1
        self.l2 = l2
        self.l3 = l3


def verify_homotopy(hd: HomotopyData) -> dict:
    """Degree-wise report on the resolution identities.

    Checks l1.l1 = 0, eta.lam = 1 on F, and
    lam.eta - 1 = l1 s + s l1 in every degree (degrees > 0 read -1 = l1 s + s l1).
    """
    sp = hd.space
    checks = {}
    for k in range(2, sp.top + 1):
        checks["l1_l1_zero@%d" % k] = (hd.l1.block(k - 1) @ hd.l1.block(k)).is_zero()
    checks["eta_lam_identity"] = (hd.eta @ hd.lam) == RatMatrix.identity(hd.f_dim)
    # degree 0: lam.eta - 1 = l1 s   (s l1 vanishes: l1 is zero on X_0)
    lhs0 = (hd.lam @ hd.eta) - RatMatrix.identity(sp.dim(0))
    rhs0 = hd.l1.block(1) @ hd.s.block(0)
    checks["homotopy@0"] = lhs0 == rhs0
    for k in range(1, sp.top + 1):
        rhs = (hd.l1.block(k + 1) @ hd.s.block(k)) + (hd.s.block(k - 1) @ hd.l1.block(k))
        checks["homotopy@%d" % k] = rhs == RatMatrix.identity(sp.dim(k)).scale(-1)
    checks["ok"] = all(v for key, v in checks.items() if key != "ok")
    return checks


def check_l2_conditions(hd: HomotopyData, l2_0: RatMatrix, d_f: RatMatrix | None = None) -> dict:
    """Check the three extension conditions on a degree-zero operator.

    B is always computed as the image of l1 on X_1 (never user-supplied).
    Condition (i) is checked only when a differential on F is passed in.
    """
    n0 = hd.space.dim(0)
    if l2_0.shape != (n0, n0):
        raise ValueError("l2_0 has shape %s, expected %s" % (l2_0.shape, (n0, n0)))
    b_mat = hd.l1.block(1)
    report = {}
    if d_f is None:
        report["condition_i"] = None
    else:
        if d_f.shape != (hd.f_dim, hd.f_dim):
            raise ValueError("d_f has shape %s, expected %s"
                             % (d_f.shape, (hd.f_dim, hd.f_dim)))
        report["condition_i"] = (hd.eta @ l2_0 @ hd.lam) == d_f
    ok_ii = True
    for v in b_mat.columns():
        if solve(b_mat, l2_0.mat_vec(v)) is None:
            ok_ii = False
            break
    report["condition_ii"] = ok_ii
    ok_iii = True
    sq = l2_0 @ l2_0
    for j in range(n0):
        if solve(b_mat, sq.col(j)) is None:
            ok_iii = False
            break
    report["condition_iii"] = ok_iii
    report["ok"] = all(v for key, v in report.items() if key != "ok" and v is not None)
    return report


def chain_extend(hd: HomotopyData, l2_0: RatMatrix, d_f: RatMatrix | None = None) -> ChainExtension:
    """Extend (l1, l2_0) to a nilpotent l1 + l2 + l3.

    In positive degrees l2 = s . l2 . l1 and l3 = s . (l2 l2 + l3 l1);
    in degree zero l3 = s . l2 l2.  Raises ValueError naming the first
    failing precondition.  Output is deterministic.
    """
    report = check_l2_conditions(hd, l2_0, d_f)
    for name in ("condition_i", "condition_ii", "condition_iii"):
        if report[name] is False:
            raise ValueError("extension precondition failed: %s" % name)
    sp = hd.space
    l2_blocks = {0: l2_0}
    for k in range(1, sp.top + 1):
        prev = l2_blocks.get(k - 1, RatMatrix.zeros(sp.dim(k - 1), sp.dim(k - 1)))
        blk = hd.s.block(k - 1) @ prev @ hd.l1.block(k)
        if not blk.is_zero():
            l2_blocks[k] = blk
    l3_blocks = {}
    sq0 = l2_0 @ l2_0
    blk0 = hd.s.block(0) @ sq0
    if not blk0.is_zero():
        l3_blocks[0] = blk0
    for k in range(1, sp.top):
        l2_k = l2_blocks.get(k, RatMatrix.zeros(sp.dim(k), sp.dim(k)))
        inner = l2_k @ l2_k
        prev3 = l3_blocks.get(k - 1, RatMatrix.zeros(sp.dim(k), sp.dim(k - 1)))
        inner = inner + (prev3 @ hd.l1.block(k))
        blk = hd.s.block(k) @ inner
        if not blk.is_zero():
            l3_blocks[k] = blk
    l2 = GradedMap(sp, 0, l2_blocks)
    l3 = GradedMap(sp, +1, l3_blocks)
    return ChainExtension(sp, hd.l1, l2, l3)


def verify_nilpotent(ext: ChainExtension) -> dict:
    """Check the four graded relations, the structural vanishings, and l^2 = 0."""
    sp = ext.space
    l1, l2, l3 = ext.l1, ext.l2, ext.l3
    checks = {}
    r1 = l1.compose(l2).add(l2.compose(l1))
    checks["l1l2_plus_l2l1_zero"] = r1.is_zero()
    r2 = l2.compose(l2).add(l1.compose(l3)).add(l3.compose(l1))
    checks["l2l2_plus_l1l3_plus_l3l1_zero"] = r2.is_zero()
    r3 = l2.compose(l3).add(l3.compose(l2))
    checks["l2l3_plus_l3l2_zero"] = r3.is_zero()
    checks["l3l3_zero"] = l3.compose(l3).is_zero()
    checks["l2_vanishes_above_degree_1"] = all(
        l2.block(k).is_zero() for k in range(2, sp.top + 1))
    checks["l3_vanishes_above_degree_0"] = all(
        l3.block(k).is_zero() for k in range(1, sp.top + 1))
    total = ext.l1.total_matrix() + ext.l2.total_matrix() + ext.l3.total_matrix()
    checks["total_square_zero"] = (total @ total).is_zero()
    checks["ok"] = all(v for key, v in checks.items() if key != "ok")
    return checks


def total_homology_dims(ext: ChainExtension) -> int:
    """dim ker(l) - rank(l) for the total operator l = l1 + l2 + l3."""
    total = ext.l1.total_matrix() + ext.l2.total_matrix() + ext.l3.total_matrix()
    rk = rank(total)
    return ext.space.total_dim - 2 * rk


def homology_dim_of_differential(d: RatMatrix) -> int:
    """dim ker d - rank d for a square matrix with d^2 = 0 (asserted)."""
    if d.nrows != d.ncols:
        raise ValueError("differential must be square")
    if not (d @ d).is_zero():
        raise ValueError("matrix does not square to zero")
    rk = rank(d)
    return d.ncols - 2 * rk
