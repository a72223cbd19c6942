"""Transfer of the twisted differential onto R (x) H along a retract.

The construction works degreewise with exact coefficients.  A retract
splits the algebra as A + B + C with d vanishing on A and B and carrying C
isomorphically onto B; cycles chosen from A realize the cohomology.  The
twisted part t of the extended differential strictly lowers word length,
so on any bounded degree range the geometric series of correction terms
stabilizes after finitely many steps -- no convergence bookkeeping is
needed, every identity below is checked as an exact matrix identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import DomainError, ValidationError
from .groebner import (
    DEFAULT_DEGREE_CAP,
    FiniteLengthReport,
    PresentationMap,
    _buchberger_tracked,
    division,
    finite_length_and_hilbert,
    syzygies_of_columns,
)
from .polyring import FreeModule, ModuleElement, Polynomial, Ring
from .sullivan import ActionExtension, AlgebraElement, SullivanModel


class LambdaBasis:
    """Indexed monomial bases of a free algebra through a top degree."""

    def __init__(self, model: SullivanModel, top: int):
        self.model = model
        self.top = top
        self.by_degree = {}
        self.monomials = []
        self.degree_of = []
        self.index = {}
        self.local_index = {}
        for p in range(top + 1):
            monos = model.monomial_basis(p)
            self.by_degree[p] = monos
            for loc, m in enumerate(monos):
                self.index[m] = len(self.monomials)
                self.local_index[m] = loc
                self.monomials.append(m)
                self.degree_of.append(p)

    def dim(self, p: int) -> int:
        return len(self.by_degree.get(p, []))

    def global_index(self, p: int, local: int) -> int:
        return self.index[self.by_degree[p][local]]

    def element_to_local(self, elem: AlgebraElement, p: int):
        vec = [Fraction(0)] * self.dim(p)
        monos = self.by_degree[p]
        pos = {m: i for i, m in enumerate(monos)}
        for m, c in elem.terms.items():
            vec[pos[m]] += c
        return vec

    def max_word_length(self) -> int:
        return max((sum(e for _, e in m) for m in self.monomials), default=0)


@dataclass
class RetractData:
    """Degreewise splitting of the algebra plus the retract maps.

    `h_info[i] = (degree, local coordinates of the cycle, tag)`; tags mark
    seeded classes so later stages can find them again.
    """

    model: SullivanModel
    cutoff: int
    basis: LambdaBasis
    h_info: list
    a_count: dict
    b_count: dict
    c_locals: dict
    minv: dict
    h_offset: dict = field(default_factory=dict)

    def dim_A(self, p):
        return self.a_count.get(p, 0)

    def dim_B(self, p):
        return self.b_count.get(p, 0)

    def dim_C(self, p):
        return len(self.c_locals.get(p, []))

    def h_indices_of_degree(self, p):
        return [i for i, (deg, _, _) in enumerate(self.h_info) if deg == p]

    def f_vector(self, h_index):
        deg, vec, _ = self.h_info[h_index]
        return deg, vec

    def split_local(self, p, vec):
        """Coordinates of vec in the (A | d(C_{p-1}) | C_p) basis of degree p."""
        minv = self.minv[p]
        return [sum(row[i] * vec[i] for i in range(len(vec))) for row in minv]

    def g_local(self, p, vec):
        """A-coordinates (paired with their global H indices)."""
        x = self.split_local(p, vec)
        na = self.dim_A(p)
        out = {}
        base = self.h_offset[p]
        for a in range(na):
            if x[a]:
                out[base + a] = x[a]
        return out

    def phi_local(self, p, vec):
        """Homotopy: minus the d-preimage of the B-part, landing in degree p-1."""
        x = self.split_local(p, vec)
        na, nb = self.dim_A(p), self.dim_B(p)
        prev = [Fraction(0)] * self.basis.dim(p - 1)
        for bpos in range(nb):
            coeff = x[na + bpos]
            if coeff:
                prev[self.c_locals[p - 1][bpos]] -= coeff
        return prev


def _d_matrix_columns(model, basis: LambdaBasis, p: int):
    """d on degree p, one output vector (over degree p+1) per basis monomial."""
    cols = []
    target = basis.by_degree.get(p + 1, [])
    pos = {m: i for i, m in enumerate(target)}
    for m in basis.by_degree[p]:
        img = model.d(AlgebraElement(model, {m: Fraction(1)}))
        vec = [Fraction(0)] * len(target)
        for mm, c in img.terms.items():
            vec[pos[mm]] += c
        cols.append(vec)
    return cols


def build_retract(model: SullivanModel, cutoff: int = None, seed=None) -> RetractData:
    """Split the algebra through `cutoff` and assemble the retract maps.

    `seed` is a list of (tag, AlgebraElement) whose spans must end up inside
    A; seeds must be cycles, independent of each other and of the
    coboundaries, or a ValidationError is raised.
    """
    if cutoff is None:
        cutoff = model.top_degree()
        if cutoff is None:
            raise DomainError("cutoff is mandatory when even generators are present")
    basis = LambdaBasis(model, cutoff + 1)
    seed = list(seed or [])
    seeds_by_degree = {}
    for tag, elem in seed:
        if elem.is_zero() or not elem.is_homogeneous():
            raise ValidationError(f"seed {tag} must be homogeneous and nonzero")
        if not model.d(elem).is_zero():
            raise ValidationError(f"seed {tag} is not a cycle")
        seeds_by_degree.setdefault(elem.degree(), []).append((tag, elem))

    h_info = []
    a_count, b_count, c_locals, minv, h_offset = {}, {}, {}, {}, {}
    prev_d_cols = None
    for p in range(cutoff + 1):
        n = basis.dim(p)
        d_cols = _d_matrix_columns(model, basis, p)
        # C: pivot monomials of d_p (their images form a basis of B_{p+1}).
        dmat = [[d_cols[j][i] for j in range(n)] for i in range(basis.dim(p + 1))]
        _, pivots = linalg.rref(dmat)
        c_locals[p] = pivots
        # B_p: image of the previous differential.
        b_vectors = []
        if p > 0 and prev_d_cols is not None:
            for loc in c_locals[p - 1]:
                b_vectors.append(prev_d_cols[loc])
        b_count[p] = len(b_vectors)
        # Kernel of d_p, then A = seeds + a deterministic completion.
        kernel = linalg.kernel_basis(dmat, n)
        span = linalg.Subspace(n)
        for b in b_vectors:
            span.add(b)
        a_vectors = []
        for tag, elem in seeds_by_degree.get(p, []):
            vec = basis.element_to_local(elem, p)
            if not span.add(vec):
                raise ValidationError(f"seed {tag} is not independent (lies in B + earlier seeds)")
            a_vectors.append((tag, vec))
        for vec in kernel:
            if span.add(vec):
                a_vectors.append((None, vec))
        a_count[p] = len(a_vectors)
        h_offset[p] = len(h_info)
        for tag, vec in a_vectors:
            h_info.append((p, vec, tag))
        # Invert the change of basis [A | d(C_{p-1}) | C_p] -> monomials.
        columns = [vec for _, vec in a_vectors] + b_vectors
        for loc in pivots:
            unit = [Fraction(0)] * n
            unit[loc] = Fraction(1)
            columns.append(unit)
        if len(columns) != n:
            raise ValidationError(
                f"degree {p}: A+B+C has dimension {len(columns)} != {n}"
            )
        minv[p] = _invert(columns, n)
        prev_d_cols = d_cols
    return RetractData(model, cutoff, basis, h_info, a_count, b_count, c_locals, minv, h_offset)


def _invert(columns, n):
    if n == 0:
        return []
    aug = [[columns[j][i] for j in range(n)] + [Fraction(1 if k == i else 0) for k in range(n)] for i in range(n)]
    red, pivots = linalg.rref(aug)
    if pivots != list(range(n)):
        raise ValidationError("split basis is singular")
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------
# R-linear operator calculus.  An "rvec" is {global monomial index: Polynomial}.


def _rvec_add(a, b):
    out = dict(a)
    for k, p in b.items():
        s = out.get(k)
        out[k] = p if s is None else s + p
        if out[k].is_zero():
            del out[k]
    return out


def _rvec_scale_poly(a, poly):
    out = {}
    for k, p in a.items():
        q = p * poly
        if not q.is_zero():
            out[k] = q
    return out


def _rvec_is_zero(a):
    return all(p.is_zero() for p in a.values())


class OperatorContext:
    """Everything needed to run the perturbation series for one extension."""

    def __init__(self, ext: ActionExtension, rd: RetractData):
        self.ext = ext
        self.rd = rd
        self.model = ext.base
        if rd.model.generators != self.model.generators:
            raise ValidationError("retract was built for a different model")
        self.ring = Ring(ext.torus_rank, var_degree=2)
        self.basis = rd.basis
        self.t_table = [self._t_of(idx) for idx in range(len(self.basis.monomials))]
        self.word_cap = self.basis.max_word_length() + 2

    # -- conversions -------------------------------------------------------

    def _to_rvec(self, extended_elem: AlgebraElement):
        out = {}
        for mono, coeff in extended_elem.terms.items():
            alpha, base_mono = self.ext.split_monomial(mono)
            if base_mono not in self.basis.index:
                raise DomainError("operator output escaped the basis range")
            idx = self.basis.index[base_mono]
            poly = self.ring.monomial(alpha, coeff)
            cur = out.get(idx)
            out[idx] = poly if cur is None else cur + poly
        return {k: p for k, p in out.items() if not p.is_zero()}

    def _t_of(self, idx):
        mono = self.basis.monomials[idx]
        elem = AlgebraElement(self.model, {mono: Fraction(1)})
        big = self.ext.D(self.ext.embed(elem))
        small = self.ext.embed(self.model.d(elem))
        return self._to_rvec(big - small)

    # -- R-linear extensions of the basic maps ------------------------------

    def apply_t(self, rvec):
        out = {}
        for idx, poly in rvec.items():
            out = _rvec_add(out, _rvec_scale_poly(self.t_table[idx], poly))
        return out

    def apply_phi(self, rvec):
        out = {}
        by_degree = {}
        for idx, poly in rvec.items():
            by_degree.setdefault(self.basis.degree_of[idx], {})[idx] = poly
        for p, part in by_degree.items():
            vec_polys = [self.ring.zero()] * self.basis.dim(p)
            for idx, poly in part.items():
                vec_polys[self.basis.local_index[self.basis.monomials[idx]]] = poly
            # phi is Q-linear; apply it column by column over the polynomials.
            for loc, poly in enumerate(vec_polys):
                if poly.is_zero():
                    continue
                unit = [Fraction(0)] * self.basis.dim(p)
                unit[loc] = Fraction(1)
                prev = self.rd.phi_local(p, unit)
                for ploc, c in enumerate(prev):
                    if c:
                        gidx = self.basis.global_index(p - 1, ploc)
                        cur = out.get(gidx)
                        add = poly.scale(c)
                        out[gidx] = add if cur is None else cur + add
        return {k: v for k, v in out.items() if not v.is_zero()}

    def apply_g(self, rvec):
        """R (x) Lambda -> R (x) H; returns {h index: Polynomial}."""
        out = {}
        for idx, poly in rvec.items():
            p = self.basis.degree_of[idx]
            unit = [Fraction(0)] * self.basis.dim(p)
            unit[self.basis.local_index[self.basis.monomials[idx]]] = Fraction(1)
            for h_idx, c in self.rd.g_local(p, unit).items():
                add = poly.scale(c)
                cur = out.get(h_idx)
                out[h_idx] = add if cur is None else cur + add
        return {k: v for k, v in out.items() if not v.is_zero()}

    def f_rvec(self, h_index):
        deg, vec = self.rd.f_vector(h_index)
        out = {}
        for loc, c in enumerate(vec):
            if c:
                out[self.basis.global_index(deg, loc)] = self.ring.constant(c)
        return out

    def apply_D(self, rvec):
        out = {}
        for idx, poly in rvec.items():
            mono = self.basis.monomials[idx]
            elem = AlgebraElement(self.model, {mono: Fraction(1)})
            img = self._to_rvec(self.ext.D(self.ext.embed(elem)))
            out = _rvec_add(out, _rvec_scale_poly(img, poly))
        return out

    # -- stabilized series --------------------------------------------------

    def sigma(self, rvec):
        """Sum of t, t phi t, t phi t phi t, ... applied to rvec (stabilizes)."""
        acc = {}
        u = self.apply_t(rvec)
        steps = 0
        while not _rvec_is_zero(u):
            acc = _rvec_add(acc, u)
            steps += 1
            if steps > self.word_cap:
                raise ValidationError(
                    "perturbation series did not stabilize; the extension data is invalid"
                )
            u = self.apply_t(self.apply_phi(u))
        return acc


@dataclass
class HirschBrownModel:
    """Free differential module (R (x) H, delta) in the cdga grading."""

    ring: Ring
    h_degrees: tuple
    h_tags: tuple
    delta: dict  # column h index -> {row h index: Polynomial}
    torus_rank: int
    cutoff: int

    def delta_entry(self, row: int, col: int) -> Polynomial:
        return self.delta.get(col, {}).get(row, self.ring.zero())

    @property
    def h_rank(self) -> int:
        return len(self.h_degrees)

    def betti_of_h(self):
        out = {}
        for d in self.h_degrees:
            out[d] = out.get(d, 0) + 1
        return out


def perturb(ext: ActionExtension, rd: RetractData) -> HirschBrownModel:
    """Transferred differential delta = g (sum of twisted corrections) f.

    Raises when the series fails to stabilize (invalid extension data) and
    checks that every matrix entry lands in the augmentation ideal.
    """
    ctx = OperatorContext(ext, rd)
    delta = {}
    for h_idx in range(len(rd.h_info)):
        acc = ctx.sigma(ctx.f_rvec(h_idx))
        col = ctx.apply_g(acc)
        for row, poly in col.items():
            if poly.constant_term() != 0:
                raise ValidationError(
                    "transferred differential has a constant term; retract is inconsistent"
                )
        if col:
            delta[h_idx] = col
    return HirschBrownModel(
        ring=ctx.ring,
        h_degrees=tuple(deg for deg, _, _ in rd.h_info),
        h_tags=tuple(tag for _, _, tag in rd.h_info),
        delta=delta,
        torus_rank=ext.torus_rank,
        cutoff=rd.cutoff,
    )


# ---------------------------------------------------------------------------
# Verification of the transfer identities.


@dataclass
class TransferReport:
    ok: bool
    failures: list
    checked_up_to: int

    def __bool__(self):
        return self.ok


def verify_transfer(ext: ActionExtension, rd: RetractData, hb: HirschBrownModel) -> TransferReport:
    """Exact check of the limit identities of the transferred retract.

    delta-related identities use hb's matrix (so a corrupted model is
    caught); the deformed maps are recomputed from the retract.  The first
    violated identity is reported with a witness basis element.
    """
    ctx = OperatorContext(ext, rd)
    failures = []
    verify_cutoff = rd.cutoff if rd.model.all_odd() else rd.cutoff - 1

    def delta_of(h_idx):
        return dict(hb.delta.get(h_idx, {}))

    def delta_on_hvec(hvec):
        out = {}
        for h_idx, poly in hvec.items():
            out = _hvec_add(out, {k: v * poly for k, v in delta_of(h_idx).items()})
        return {k: v for k, v in out.items() if not v.is_zero()}

    def f_inf(h_idx):
        base = ctx.f_rvec(h_idx)
        acc = ctx.sigma(base)
        return _rvec_add(base, ctx.apply_phi(acc))

    def f_inf_on_hvec(hvec):
        out = {}
        for h_idx, poly in hvec.items():
            out = _rvec_add(out, _rvec_scale_poly(f_inf(h_idx), poly))
        return out

    def g_inf(rvec):
        acc = ctx.sigma(ctx.apply_phi(rvec))
        return _hvec_add(ctx.apply_g(rvec), ctx.apply_g(acc))

    def phi_inf(rvec):
        acc = ctx.sigma(ctx.apply_phi(rvec))
        return _rvec_add(ctx.apply_phi(rvec), ctx.apply_phi(acc))

    h_indices = [i for i, (deg, _, _) in enumerate(rd.h_info) if deg <= verify_cutoff]
    basis_indices = [
        i for i in range(len(ctx.basis.monomials)) if ctx.basis.degree_of[i] <= verify_cutoff
    ]

    def check(name, condition_fn, witnesses):
        for w, desc in witnesses:
            if not condition_fn(w):
                failures.append((name, desc))
                return

    # delta^2 = 0.
    check(
        "delta^2 = 0",
        lambda h: _hvec_is_zero(delta_on_hvec(delta_of(h))),
        [(h, f"H class #{h} (degree {rd.h_info[h][0]})") for h in h_indices],
    )
    # D f = f delta.
    check(
        "D f_inf = f_inf delta",
        lambda h: _rvec_is_zero(
            _rvec_sub(ctx.apply_D(f_inf(h)), f_inf_on_hvec(delta_of(h)))
        ),
        [(h, f"H class #{h}") for h in h_indices],
    )
    # delta g = g D.
    check(
        "delta g_inf = g_inf D",
        lambda i: _hvec_is_zero(
            _hvec_sub(
                delta_on_hvec(g_inf(_unit_rvec(ctx, i))),
                g_inf(ctx.apply_D(_unit_rvec(ctx, i))),
            )
        ),
        [(i, f"basis monomial #{i}") for i in basis_indices],
    )
    # g f = id.
    def gf_is_identity(h):
        got = g_inf(f_inf(h))
        want = {h: ctx.ring.one()}
        return _hvec_is_zero(_hvec_sub(got, want))

    check("g_inf f_inf = id", gf_is_identity, [(h, f"H class #{h}") for h in h_indices])

    # f g - id = D phi + phi D.
    def homotopy_identity(i):
        unit = _unit_rvec(ctx, i)
        lhs = _rvec_sub(f_inf_on_hvec(g_inf(unit)), unit)
        rhs = _rvec_add(ctx.apply_D(phi_inf(unit)), phi_inf(ctx.apply_D(unit)))
        return _rvec_is_zero(_rvec_sub(lhs, rhs))

    check(
        "f_inf g_inf - id = D phi_inf + phi_inf D",
        homotopy_identity,
        [(i, f"basis monomial #{i}") for i in basis_indices],
    )
    # Side conditions.
    check(
        "phi_inf^2 = 0",
        lambda i: _rvec_is_zero(phi_inf(phi_inf(_unit_rvec(ctx, i)))),
        [(i, f"basis monomial #{i}") for i in basis_indices],
    )
    check(
        "phi_inf f_inf = 0",
        lambda h: _rvec_is_zero(phi_inf(f_inf(h))),
        [(h, f"H class #{h}") for h in h_indices],
    )
    check(
        "g_inf phi_inf = 0",
        lambda i: _hvec_is_zero(g_inf(phi_inf(_unit_rvec(ctx, i)))),
        [(i, f"basis monomial #{i}") for i in basis_indices],
    )
    return TransferReport(not failures, failures, verify_cutoff)


def _unit_rvec(ctx, idx):
    return {idx: ctx.ring.one()}


def _hvec_add(a, b):
    out = dict(a)
    for k, p in b.items():
        s = out.get(k)
        out[k] = p if s is None else s + p
        if out[k].is_zero():
            del out[k]
    return out


def _hvec_sub(a, b):
    return _hvec_add(a, {k: -p for k, p in b.items()})


def _hvec_is_zero(a):
    return all(p.is_zero() for p in a.values())


def _rvec_sub(a, b):
    return _rvec_add(a, {k: -p for k, p in b.items()})


# ---------------------------------------------------------------------------
# The degree-1 splitting of cycles by injectivity of D.


@dataclass(frozen=True)
class ZSplit:
    """ker(d on degree-1 generators) = Z + Z', with D injective on Z.

    Vectors are coordinates over `v1_gens` (the degree-1 generator indices);
    k = dim Z', b = dim ker(d|degree 1).
    """

    v1_gens: tuple
    Z: tuple
    Zprime: tuple

    @property
    def k(self) -> int:
        return len(self.Zprime)

    @property
    def b(self) -> int:
        return len(self.Z) + len(self.Zprime)


def split_Z(ext: ActionExtension) -> ZSplit:
    model = ext.base
    v1 = [i for i in range(len(model.generators)) if model.degree(i) == 1]
    if not v1:
        return ZSplit((), (), ())
    # Kernel of d restricted to degree-1 generators.
    img_monos = sorted({m for i in v1 for m in model.d_of_gen(i).terms})
    pos = {m: k for k, m in enumerate(img_monos)}
    mat = [[Fraction(0)] * len(v1) for _ in img_monos]
    for col, i in enumerate(v1):
        for m, c in model.d_of_gen(i).terms.items():
            mat[pos[m]][col] += c
    kernel = linalg.kernel_basis(mat, len(v1))
    if not kernel:
        return ZSplit(tuple(v1), (), ())
    # D on a kernel vector is purely linear in the torus variables.
    rows = []
    for vec in kernel:
        combo = ext.extended.zero()
        for c, i in zip(vec, v1):
            if c:
                combo = combo + ext.extended.d_of_gen(ext.offset + i).scale(c)
        coeffs = [Fraction(0)] * ext.torus_rank
        for mono, cc in combo.terms.items():
            alpha, base = ext.split_monomial(mono)
            if base:
                raise ValidationError(
                    "D of a d-cycle of degree 1 has a component outside R^2 (x) 1"
                )
            (x_idx,) = [j for j, a in enumerate(alpha) if a]
            coeffs[x_idx] += cc
        rows.append(coeffs)
    dmat = [[rows[j][i] for j in range(len(kernel))] for i in range(ext.torus_rank)]
    zprime_coords = linalg.kernel_basis(dmat, len(kernel))
    zprime = []
    span = linalg.Subspace(len(v1))
    for coords in zprime_coords:
        vec = [sum(c * kernel[j][pos_] for j, c in enumerate(coords)) for pos_ in range(len(v1))]
        span.add(vec)
        zprime.append(tuple(vec))
    z = []
    for vec in kernel:
        if span.add(vec):
            z.append(tuple(vec))
    return ZSplit(tuple(v1), tuple(z), tuple(zprime))


def zsplit_seed(model: SullivanModel, zs: ZSplit):
    """Seeds for build_retract: the exterior monomials on Z and the Z' lines."""
    def vec_elem(vec):
        acc = model.zero()
        for c, i in zip(vec, zs.v1_gens):
            if c:
                acc = acc + model.gen(i).scale(c)
        return acc

    seeds = [(("lz", ()), model.one())]
    z_elems = [vec_elem(v) for v in zs.Z]
    n = len(z_elems)
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            prod = model.one()
            for s in subset:
                prod = prod * z_elems[s]
            seeds.append((("lz", subset), prod))
    for i, v in enumerate(zs.Zprime):
        seeds.append((("zp", i), vec_elem(v)))
    return seeds


def seeded_retract(ext: ActionExtension, zs: ZSplit, cutoff: int = None) -> RetractData:
    return build_retract(ext.base, cutoff, seed=zsplit_seed(ext.base, zs))


# ---------------------------------------------------------------------------
# Finite-dimensionality of the transferred cohomology.


@dataclass
class HBFiniteReport:
    finite: bool
    total_dim: int
    parts: dict  # "even"/"odd" -> FiniteLengthReport

    def __bool__(self):
        return self.finite


def hb_cohomology_finite(hb: HirschBrownModel, degree_cap: int = DEFAULT_DEGREE_CAP) -> HBFiniteReport:
    """Homology of (R (x) H, delta) via syzygy kernels and lifted images.

    The module splits by generator parity; each homology piece is presented
    as a cokernel and run through the finite-length test.  total_dim is the
    sum over both parities when finite.
    """
    parts = {}
    total = 0
    finite = True
    for parity in (0, 1):
        rep = _homology_presentation(hb, parity, degree_cap)
        parts["even" if parity == 0 else "odd"] = rep
        if not rep.finite:
            finite = False
        else:
            total += rep.total_dim
    return HBFiniteReport(finite, total if finite else None, parts)


def _parity_indices(hb, parity):
    return [i for i, d in enumerate(hb.h_degrees) if d % 2 == parity]


def _delta_map(hb: HirschBrownModel, parity: int) -> PresentationMap:
    """delta restricted to the parity part, as a graded map into the other."""
    src = _parity_indices(hb, parity)
    dst = _parity_indices(hb, 1 - parity)
    dst_pos = {h: i for i, h in enumerate(dst)}
    target = FreeModule(hb.ring, tuple(hb.h_degrees[h] for h in dst))
    cols = []
    for h in src:
        comps = [hb.ring.zero()] * len(dst)
        for row, poly in hb.delta.get(h, {}).items():
            comps[dst_pos[row]] = poly
        cols.append(ModuleElement(target, tuple(comps)))
    source = FreeModule(hb.ring, tuple(hb.h_degrees[h] + 1 for h in src))
    return PresentationMap(source, target, tuple(cols))


def _homology_presentation(hb, parity, degree_cap):
    """Present ker(delta|parity) / im(delta|other parity) as a cokernel.

    Degrees inside the presentation are uniformly the cdga degree + 1 (the
    kernel is computed in the source grading of the delta map); the shift
    does not affect finiteness or total dimension.
    """
    out_map = _delta_map(hb, parity)
    in_map = _delta_map(hb, 1 - parity)
    kernel = syzygies_of_columns(out_map, degree_cap)
    # kernel: R^s -> out_map.source; its columns generate ker(delta|parity).
    if kernel.source.rank == 0:
        # Homology is zero iff the incoming image is zero too (it must be,
        # since im is inside ker); present the zero module.
        if any(not c.is_zero() for c in in_map.columns):
            raise ValidationError("delta^2 != 0: image is not contained in the kernel")
        return FiniteLengthReport(True, (0,), 0, None)
    gb, reps = _buchberger_tracked(list(kernel.columns), degree_cap, track=True)
    lifted_cols = []
    for col in in_map.columns:
        as_kernel_elem = ModuleElement(kernel.target, col.components)
        rem, cof = division(as_kernel_elem, list(gb.elements), with_cofactors=True)
        if not rem.is_zero():
            raise ValidationError("delta^2 != 0: an image column is not in the kernel")
        acc = [hb.ring.zero()] * kernel.source.rank
        for k, q in enumerate(cof):
            if not q.is_zero():
                acc = [a + q * b for a, b in zip(acc, reps[k])]
        lifted_cols.append(acc)
    target = kernel.source
    cols = [ModuleElement(target, tuple(acc)) for acc in lifted_cols]
    # The chosen kernel generators may have relations of their own; the
    # quotient presentation must divide by those as well.
    cols.extend(syzygies_of_columns(kernel, degree_cap).columns)
    cols = [c for c in cols if not c.is_zero()]
    pres = PresentationMap.from_columns(target, tuple(cols))
    return finite_length_and_hilbert(pres, degree_cap)


def hb_homology_dims_by_degree(hb: HirschBrownModel, up_to: int):
    """Independent oracle: dim of homology of (R (x) H, delta) per cdga degree.

    Pure rational linear algebra on the graded pieces, no Groebner bases.
    """
    from .resolutions import _monomials_of_degree

    r = hb.torus_rank

    def piece_basis(m):
        out = []
        for h, d in enumerate(hb.h_degrees):
            rem = m - d
            if rem < 0 or rem % 2:
                continue
            for alpha in _monomials_of_degree(r, rem // 2):
                out.append((alpha, h))
        return out

    def delta_matrix(m):
        dom = piece_basis(m)
        cod = piece_basis(m + 1)
        pos = {bc: i for i, bc in enumerate(cod)}
        rows = [[Fraction(0)] * len(dom) for _ in cod]
        for cidx, (alpha, h) in enumerate(dom):
            for row_h, poly in hb.delta.get(h, {}).items():
                for exp, coeff in poly.terms.items():
                    beta = tuple(a + e for a, e in zip(alpha, exp))
                    key = (beta, row_h)
                    if key in pos:
                        rows[pos[key]][cidx] += coeff
        return rows, len(dom)

    ranks = {}
    dims = {}
    for m in range(up_to + 2):
        mat, ncols = delta_matrix(m)
        dims[m] = ncols
        ranks[m] = linalg.rank(mat) if ncols else 0
    out = []
    for m in range(up_to + 1):
        out.append(dims[m] - ranks[m] - (ranks.get(m - 1, 0)))
    return out


# ---------------------------------------------------------------------------
# Projected presentations consumed by the generator-count inequality.


@dataclass
class ProjectionMaps:
    map_even: PresentationMap  # R (x) (H / exterior part)^even -> R (x) Z'bar
    map_odd: PresentationMap  # R (x) H^odd -> R (x) H^(<k_first)
    k_first: int
    even_vacuous: bool
    odd_vacuous: bool


def projection_presentations(hb: HirschBrownModel, zs: ZSplit) -> ProjectionMaps:
    """Project the transferred differential onto the two target submodules.

    Both maps come out in the resolution grading (variables of degree 1):
    a target class of cdga degree m sits in degree (m - parity)/2, and each
    column keeps the degree its entries dictate.
    """
    tags = hb.h_tags
    if all(t is None for t in tags):
        raise ValidationError("model was built from an unseeded retract")
    res_ring = Ring(hb.torus_rank, var_degree=1)

    def regrade(poly):
        return poly.with_ring(res_ring)

    lz = [i for i, t in enumerate(tags) if t is not None and t[0] == "lz"]
    zp = [i for i, t in enumerate(tags) if t is not None and t[0] == "zp"]
    if len(zp) != zs.k:
        raise ValidationError("retract seeds do not match the given splitting")

    # Even map: sources are even classes outside the exterior part.
    even_src = [i for i in range(hb.h_rank) if hb.h_degrees[i] % 2 == 0 and i not in lz]
    for i in lz:
        if hb.h_degrees[i] % 2 == 0:
            col = hb.delta.get(i, {})
            for row in zp:
                if row in col and not col[row].is_zero():
                    raise ValidationError(
                        "delta does not preserve the exterior part; seeding is inconsistent"
                    )
    even_target = FreeModule(res_ring, tuple(0 for _ in zp))
    zp_pos = {h: i for i, h in enumerate(zp)}
    even_cols = []
    for src in even_src:
        comps = [res_ring.zero()] * len(zp)
        for row, poly in hb.delta.get(src, {}).items():
            if row in zp_pos:
                comps[zp_pos[row]] = regrade(poly)
        even_cols.append(ModuleElement(even_target, tuple(comps)))
    even_source = FreeModule(res_ring, tuple(hb.h_degrees[i] // 2 for i in even_src))
    map_even = PresentationMap(even_source, even_target, tuple(even_cols))

    # Odd map: project delta on odd classes onto everything below the first
    # degree with odd cohomology.
    odd_degrees = sorted({hb.h_degrees[i] for i in range(hb.h_rank) if hb.h_degrees[i] % 2})
    k_first = odd_degrees[0] if odd_degrees else None
    odd_src = [i for i in range(hb.h_rank) if hb.h_degrees[i] % 2 == 1]
    low = [i for i in range(hb.h_rank) if k_first is not None and hb.h_degrees[i] < k_first]
    low_pos = {h: i for i, h in enumerate(low)}
    odd_target = FreeModule(res_ring, tuple(hb.h_degrees[i] // 2 for i in low))
    odd_cols = []
    for src in odd_src:
        comps = [res_ring.zero()] * len(low)
        for row, poly in hb.delta.get(src, {}).items():
            if row in low_pos:
                comps[low_pos[row]] = regrade(poly)
        odd_cols.append(ModuleElement(odd_target, tuple(comps)))
    odd_source = FreeModule(res_ring, tuple((hb.h_degrees[i] + 1) // 2 for i in odd_src))
    map_odd = PresentationMap(odd_source, odd_target, tuple(odd_cols))

    return ProjectionMaps(
        map_even=map_even,
        map_odd=map_odd,
        k_first=k_first,
        even_vacuous=len(zp) == 0 or len(even_src) == 0,
        odd_vacuous=len(odd_src) == 0 or len(low) == 0,
    )
