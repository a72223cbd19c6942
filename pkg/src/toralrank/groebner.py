"""Buchberger-style Groebner bases for submodules of graded free modules.

One module order is shipped: position-over-term refined by
degree-reverse-lexicographic, with lower generator index winning.  All
inputs are required to be homogeneous, which keeps every S-pair and normal
form homogeneous and makes the degree cap meaningful.

The syzygy machinery follows the classical cofactor construction: every
S-pair of a Groebner basis reduces to zero, and the bookkeeping of that
reduction is a generator of the syzygy module.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegreeCapError, DomainError, InhomogeneousError, ParseError, RingMismatchError
from .polyring import FreeModule, ModuleElement, Polynomial, Ring, parse_poly

DEFAULT_DEGREE_CAP = 64


class ModuleOrder:
    """Position-over-term / degrevlex; the only order this package ships."""

    name = "position-over-term, degrevlex, lower generator index first"

    @staticmethod
    def sort_key(term):
        (exp, comp) = term
        # Ascending sort by this key lists terms from largest to smallest.
        return (comp, -sum(exp), tuple(reversed(exp)))

    @classmethod
    def greater(cls, t1, t2) -> bool:
        return cls.sort_key(t1) < cls.sort_key(t2)


POT_DEGREVLEX = ModuleOrder()


def leading_term(e: ModuleElement):
    """((exponent, component), coefficient) of the largest term, or None."""
    best = None
    best_key = None
    for term, coeff in e.terms():
        key = ModuleOrder.sort_key(term)
        if best_key is None or key < best_key:
            best, best_key = (term, coeff), key
    return best


def _divides(ea, eb) -> bool:
    return all(a <= b for a, b in zip(ea, eb))


def _exp_sub(eb, ea):
    return tuple(b - a for a, b in zip(ea, eb))


def _exp_lcm(ea, eb):
    return tuple(max(a, b) for a, b in zip(ea, eb))


def _require_homogeneous(elements):
    for e in elements:
        if not e.is_zero() and e.degree() is None:
            raise InhomogeneousError(f"inhomogeneous element: {e}")


def _internal_degree(module: FreeModule, exp, comp) -> int:
    return module.ring.var_degree * sum(exp) + module.generator_degrees[comp]


@dataclass(frozen=True)
class GroebnerBasis:
    module: FreeModule
    elements: tuple
    order: ModuleOrder = POT_DEGREVLEX

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


def division(e: ModuleElement, basis, with_cofactors=False):
    """Fully reduce e by `basis`; returns remainder (and cofactors).

    The remainder has no term divisible by any basis leading term, and
    e == sum(cofactor_i * basis_i) + remainder exactly.
    """
    module = e.module
    leads = []
    for g in basis:
        lt = leading_term(g)
        if lt is None:
            leads.append(None)
        else:
            leads.append(lt)
    work = e
    rem = module.zero_element()
    cof = [module.ring.zero() for _ in basis] if with_cofactors else None
    while not work.is_zero():
        (exp, comp), coeff = leading_term(work)
        reduced = False
        for i, lt in enumerate(leads):
            if lt is None:
                continue
            (gexp, gcomp), gcoeff = lt
            if gcomp == comp and _divides(gexp, exp):
                factor = coeff / gcoeff
                mono = _exp_sub(exp, gexp)
                work = work - basis[i].monomial_mul(mono, factor)
                if with_cofactors:
                    cof[i] = cof[i] + module.ring.monomial(mono, factor)
                reduced = True
                break
        if not reduced:
            move = module.zero_element()
            comps = list(move.components)
            comps[comp] = module.ring.monomial(exp, coeff)
            move = ModuleElement(module, comps)
            rem = rem + move
            work = work - move
    if with_cofactors:
        return rem, cof
    return rem


def normal_form(e: ModuleElement, gb: GroebnerBasis) -> ModuleElement:
    """Remainder of e under full division by the basis."""
    if e.module != gb.module:
        raise RingMismatchError("module mismatch")
    return division(e, gb.elements)


def s_pair_data(f: ModuleElement, g: ModuleElement):
    """For same-component leads: (lcm_exp, comp, mono_f, mono_g) else None."""
    ltf, ltg = leading_term(f), leading_term(g)
    if ltf is None or ltg is None:
        return None
    (ef, cf), _ = ltf
    (eg, cg), _ = ltg
    if cf != cg:
        return None
    lcm = _exp_lcm(ef, eg)
    return lcm, cf, _exp_sub(lcm, ef), _exp_sub(lcm, eg)


def _single_component(e: ModuleElement):
    comps = {s for s, p in enumerate(e.components) if not p.is_zero()}
    return comps.pop() if len(comps) == 1 else None


def _product_criterion(f, g) -> bool:
    # The coprime-lead skip is only sound when both elements live entirely
    # in one (and the same) component, where it is the classical criterion.
    sf, sg = _single_component(f), _single_component(g)
    if sf is None or sf != sg:
        return False
    (ef, _), _ = leading_term(f)
    (eg, _), _ = leading_term(g)
    return all(min(a, b) == 0 for a, b in zip(ef, eg))


def buchberger(gens, degree_cap: int = DEFAULT_DEGREE_CAP, module: FreeModule = None) -> GroebnerBasis:
    """Groebner basis of the submodule generated by the given elements.

    Inputs must be homogeneous elements of one free module.  The result is
    inter-reduced with monic leading coefficients, sorted by leading term.
    An empty generator list needs the ambient module passed explicitly.
    """
    gb, _ = _buchberger_tracked(list(gens), degree_cap, track=False, module=module)
    return gb


def _buchberger_tracked(gens, degree_cap, track=True, module=None):
    gens = [g for g in gens]
    if not gens:
        if module is None:
            raise ValueError("empty generator list needs an explicit module")
        return GroebnerBasis(module, ()), []
    module = gens[0].module
    for g in gens:
        if g.module != module:
            raise RingMismatchError("generators from different modules")
    _require_homogeneous(gens)

    basis = []
    reps = []  # reps[i][j]: coefficient of gens[j] in basis[i]
    zero_poly = module.ring.zero()

    def add_element(e, rep):
        lt = leading_term(e)
        coeff = lt[1]
        basis.append(e.scale(1 / coeff))
        reps.append([p.scale(1 / coeff) for p in rep] if track else None)

    for j, g in enumerate(gens):
        if g.is_zero():
            continue
        rep = [zero_poly] * len(gens)
        rep[j] = module.ring.one()
        add_element(g, rep)

    pairs = {(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))}
    while pairs:
        # Normal selection: smallest lcm degree first, then position.
        def pair_key(pair):
            i, j = pair
            data = s_pair_data(basis[i], basis[j])
            if data is None:
                return (-1, 0, i, j)
            lcm, comp, _, _ = data
            return (_internal_degree(module, lcm, comp), comp, i, j)

        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        data = s_pair_data(basis[i], basis[j])
        if data is None:
            continue
        lcm, comp, mono_i, mono_j = data
        if _internal_degree(module, lcm, comp) > degree_cap:
            raise DegreeCapError(
                f"S-pair degree {_internal_degree(module, lcm, comp)} exceeds cap {degree_cap}"
            )
        if _product_criterion(basis[i], basis[j]):
            continue
        s = basis[i].monomial_mul(mono_i) - basis[j].monomial_mul(mono_j)
        rem, cof = division(s, basis, with_cofactors=True)
        if rem.is_zero():
            continue
        if track:
            rep = [zero_poly] * len(gens)
            for k, q in enumerate(cof):
                if not q.is_zero():
                    rep = [a - q * b for a, b in zip(rep, reps[k])]
            rep = [a + b for a, b in zip(rep, _scaled_rep(reps[i], mono_i, module))]
            rep = [a - b for a, b in zip(rep, _scaled_rep(reps[j], mono_j, module))]
        else:
            rep = None
        new_index = len(basis)
        add_element(rem, rep)
        pairs.update((k, new_index) for k in range(new_index))

    basis, reps = _interreduce(basis, reps, module, track)
    gb = GroebnerBasis(module, tuple(basis))
    return gb, reps


def _scaled_rep(rep, mono, module):
    return [p.monomial_mul(mono) for p in rep]


def _interreduce(basis, reps, module, track):
    # Smallest leading term first, so redundant larger leads get dropped.
    order = sorted(
        range(len(basis)),
        key=lambda i: ModuleOrder.sort_key(leading_term(basis[i])[0]),
        reverse=True,
    )
    kept = []
    kept_reps = []
    lead_exps = []
    for i in order:
        (exp, comp), _ = leading_term(basis[i])
        if any(c == comp and _divides(e, exp) for e, c in lead_exps):
            continue
        kept.append(basis[i])
        kept_reps.append(reps[i] if track else None)
        lead_exps.append((exp, comp))
    # Tail-reduce each against the others; leading terms do not move, so a
    # single full pass yields the reduced basis.
    reduced = []
    reduced_reps = []
    for idx, e in enumerate(kept):
        others = kept[:idx] + kept[idx + 1 :]
        rem, cof = division(e, others, with_cofactors=True)
        scale = 1 / leading_term(rem)[1]
        reduced.append(rem.scale(scale))
        if track:
            other_reps = kept_reps[:idx] + kept_reps[idx + 1 :]
            rep = kept_reps[idx]
            for q, orep in zip(cof, other_reps):
                if not q.is_zero():
                    rep = [a - q * b for a, b in zip(rep, orep)]
            reduced_reps.append([p.scale(scale) for p in rep])
    return reduced, reduced_reps


# ---------------------------------------------------------------------------
# Presentations.


class PresentationMap:
    """Graded map F_source -> F_target given by columns in the target.

    Column s must be homogeneous of internal degree
    source.generator_degrees[s]; zero columns are allowed (their degree is
    whatever the source says).
    """

    def __init__(self, source: FreeModule, target: FreeModule, columns):
        columns = tuple(columns)
        if len(columns) != source.rank:
            raise ValueError("column count does not match source rank")
        if source.ring != target.ring:
            raise RingMismatchError("source and target over different rings")
        for s, col in enumerate(columns):
            if col.module != target:
                raise RingMismatchError("column outside the target module")
            d = col.degree()
            if not col.is_zero() and d is None:
                raise InhomogeneousError(f"column {s} is inhomogeneous")
            if d is not None and d != source.generator_degrees[s]:
                raise InhomogeneousError(
                    f"column {s} has degree {d}, source generator says {source.generator_degrees[s]}"
                )
        self.source = source
        self.target = target
        self.columns = columns

    @classmethod
    def from_columns(cls, target: FreeModule, columns, zero_degree=0):
        degs = []
        for col in columns:
            d = col.degree()
            degs.append(zero_degree if d is None else d)
        source = FreeModule(target.ring, tuple(degs))
        return cls(source, target, columns)

    @classmethod
    def from_matrix(cls, ring: Ring, target_degrees, rows):
        """Rows of polynomials; entry (i, j) multiplies target generator i."""
        target = FreeModule(ring, tuple(target_degrees))
        k = target.rank
        if len(rows) != k:
            raise ValueError(f"expected {k} rows, got {len(rows)}")
        ncols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
        cols = []
        for j in range(ncols):
            cols.append(ModuleElement(target, tuple(rows[i][j] for i in range(k))))
        return cls.from_columns(target, cols)

    def entry(self, i: int, j: int) -> Polynomial:
        return self.columns[j].components[i]

    @property
    def matrix(self):
        return [
            [self.entry(i, j) for j in range(self.source.rank)]
            for i in range(self.target.rank)
        ]

    def image_in_augmentation_ideal(self) -> bool:
        """True when no entry has a constant term (image inside I*target)."""
        return all(
            self.entry(i, j).constant_term() == 0
            for i in range(self.target.rank)
            for j in range(self.source.rank)
        )

    def compose(self, other: "PresentationMap") -> "PresentationMap":
        """self after other: source of other, target of self."""
        if other.target != self.source:
            raise RingMismatchError("maps not composable")
        cols = []
        for col in other.columns:
            acc = self.target.zero_element()
            for s, p in enumerate(col.components):
                if not p.is_zero():
                    acc = acc + self.columns[s].poly_mul(p)
            cols.append(acc)
        return PresentationMap(other.source, self.target, tuple(cols))

    def __eq__(self, other):
        return (
            isinstance(other, PresentationMap)
            and self.source == other.source
            and self.target == other.target
            and self.columns == other.columns
        )

    def __repr__(self):
        return f"PresentationMap({self.target.rank}x{self.source.rank} over {self.target.ring})"


def syzygy_basis(gb: GroebnerBasis) -> PresentationMap:
    """Generators of the syzygy module of gb.elements (cofactor construction).

    The target is the free module on the basis elements (placed at their
    internal degrees); composing the result with "evaluate at gb.elements"
    gives zero.
    """
    module = gb.module
    elements = list(gb.elements)
    degs = []
    for e in elements:
        d = e.degree()
        degs.append(0 if d is None else d)
    syz_target = FreeModule(module.ring, tuple(degs))
    columns = []
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            data = s_pair_data(elements[i], elements[j])
            if data is None:
                continue
            lcm, comp, mono_i, mono_j = data
            s = elements[i].monomial_mul(mono_i) - elements[j].monomial_mul(mono_j)
            rem, cof = division(s, elements, with_cofactors=True)
            if not rem.is_zero():
                raise ValueError("input is not a Groebner basis: an S-pair does not reduce to 0")
            comps = [-q for q in cof]
            comps[i] = comps[i] + module.ring.monomial(mono_i)
            comps[j] = comps[j] - module.ring.monomial(mono_j)
            col = ModuleElement(syz_target, tuple(comps))
            if not col.is_zero():
                columns.append(col)
    columns = _sorted_columns(columns)
    return PresentationMap.from_columns(syz_target, columns)


def _sorted_columns(columns):
    def key(col):
        d = col.degree()
        lt = leading_term(col)
        return (d if d is not None else -1, ModuleOrder.sort_key(lt[0]) if lt else ())

    uniq = []
    for col in sorted(columns, key=key):
        if col not in uniq:
            uniq.append(col)
    return uniq


def syzygies_of_columns(p: PresentationMap, degree_cap: int = DEFAULT_DEGREE_CAP) -> PresentationMap:
    """Generating set of ker(p) as columns of a map into p.source.

    Runs a tracked Buchberger pass on the columns, takes the cofactor
    syzygies of the basis, and converts both them and the division
    discrepancies of the original columns back to source coordinates.
    """
    module = p.target
    cols = list(p.columns)
    nonzero = [(j, c) for j, c in enumerate(cols) if not c.is_zero()]
    out_cols = []

    # A zero column is itself a syzygy generator.
    for j, c in enumerate(cols):
        if c.is_zero():
            out_cols.append(p.source.generator(j))

    if nonzero:
        gens = [c for _, c in nonzero]
        gb, reps = _buchberger_tracked(gens, degree_cap, track=True)
        # reps[k] expresses gb.elements[k] in terms of gens.
        syz = syzygy_basis(gb)
        t = len(gb.elements)
        for syzcol in syz.columns:
            acc = [module.ring.zero()] * len(gens)
            for k in range(t):
                q = syzcol.components[k]
                if not q.is_zero():
                    acc = [a + q * b for a, b in zip(acc, reps[k])]
            out_cols.append(_lift_to_source(p, nonzero, acc))
        # Discrepancy syzygies: c_j - sum(W_kj * g_k) with remainder zero.
        for pos, (j, c) in enumerate(nonzero):
            rem, cof = division(c, list(gb.elements), with_cofactors=True)
            if not rem.is_zero():
                raise ValueError("column failed to reduce against its own basis")
            acc = [module.ring.zero()] * len(gens)
            for k, q in enumerate(cof):
                if not q.is_zero():
                    acc = [a + q * b for a, b in zip(acc, reps[k])]
            acc[pos] = acc[pos] - module.ring.one()
            col = _lift_to_source(p, nonzero, acc)
            if not col.is_zero():
                out_cols.append(col)

    out_cols = _sorted_columns([c for c in out_cols if not c.is_zero()])
    return PresentationMap.from_columns(p.source, out_cols)


def _lift_to_source(p, nonzero, acc):
    comps = [p.target.ring.zero()] * p.source.rank
    for (j, _), poly in zip(nonzero, acc):
        comps[j] = comps[j] + poly
    return ModuleElement(p.source, tuple(comps))


# ---------------------------------------------------------------------------
# Finite length and Hilbert functions.


@dataclass(frozen=True)
class FiniteLengthReport:
    finite: bool
    hilbert: tuple
    total_dim: int
    top_degree: int

    def __bool__(self):
        return self.finite


def finite_length_and_hilbert(p: PresentationMap, degree_cap: int = DEFAULT_DEGREE_CAP) -> FiniteLengthReport:
    """Decide finite length of coker(p) and read off its Hilbert function.

    Finiteness is combinatorial: for every target component the leading-term
    module must contain a pure power of every variable.  When it does, the
    Hilbert values are the counts of standard monomials by degree, and
    top_degree is the regularity of the cokernel.
    """
    module = p.target
    ring = module.ring
    if any(d < 0 for d in module.generator_degrees):
        raise DomainError("finite_length_and_hilbert needs nonnegative generator degrees")
    if module.rank == 0:
        return FiniteLengthReport(True, (), 0, None)
    gens = [c for c in p.columns if not c.is_zero()]
    if gens:
        gb = buchberger(gens, degree_cap)
        lead = {}
        for e in gb.elements:
            (exp, comp), _ = leading_term(e)
            lead.setdefault(comp, []).append(exp)
    else:
        lead = {}

    nvars = ring.num_vars
    bounds = []
    for s in range(module.rank):
        exps = lead.get(s, [])
        comp_bounds = []
        for i in range(nvars):
            pure = [e[i] for e in exps if sum(e) == e[i]]
            if not pure:
                return FiniteLengthReport(False, None, None, None)
            comp_bounds.append(min(pure))
        bounds.append(comp_bounds)

    counts = {}
    for s in range(module.rank):
        exps = lead.get(s, [])
        for mono in _box_monomials(bounds[s]):
            if any(_divides(e, mono) for e in exps):
                continue
            d = ring.var_degree * sum(mono) + module.generator_degrees[s]
            counts[d] = counts.get(d, 0) + 1
    if not counts:
        return FiniteLengthReport(True, (0,), 0, None)
    top = max(counts)
    hilbert = tuple(counts.get(d, 0) for d in range(top + 1))
    return FiniteLengthReport(True, hilbert, sum(hilbert), top)


def _box_monomials(bounds):
    if not bounds:
        yield ()
        return
    for head in range(bounds[0]):
        for tail in _box_monomials(bounds[1:]):
            yield (head,) + tail


# ---------------------------------------------------------------------------
# Presentation file format.


def parse_presentation(text: str) -> PresentationMap:
    """Parse the line-oriented presentation format.

    Line 1: "ring r=<int> vardeg=<1|2>"; line 2: "target <d1> ... <dk>";
    line 3: "matrix <k> <l>"; then k rows of l space-free polynomial
    expressions.  Lines starting with "#" are comments.
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if len(lines) < 3:
        raise ParseError("presentation needs ring, target and matrix lines")
    ring = _parse_ring_line(lines[0])
    if not lines[1].startswith("target"):
        raise ParseError(f"expected 'target ...', got {lines[1]!r}")
    target_degrees = tuple(int(tok) for tok in lines[1].split()[1:])
    head = lines[2].split()
    if len(head) != 3 or head[0] != "matrix":
        raise ParseError(f"expected 'matrix <k> <l>', got {lines[2]!r}")
    k, l = int(head[1]), int(head[2])
    if k != len(target_degrees):
        raise ParseError(f"matrix has {k} rows but target lists {len(target_degrees)} degrees")
    body = lines[3:]
    if len(body) != k:
        raise ParseError(f"expected {k} matrix rows, got {len(body)}")
    rows = []
    for ln in body:
        toks = ln.split()
        if len(toks) != l:
            raise ParseError(f"expected {l} entries in row {ln!r}")
        rows.append([parse_poly(tok, ring) for tok in toks])
    return PresentationMap.from_matrix(ring, target_degrees, rows)


def _parse_ring_line(line: str) -> Ring:
    toks = line.split()
    if not toks or toks[0] != "ring":
        raise ParseError(f"expected 'ring ...', got {line!r}")
    fields = dict(tok.split("=", 1) for tok in toks[1:] if "=" in tok)
    try:
        return Ring(int(fields["r"]), int(fields.get("vardeg", "1")))
    except KeyError as exc:
        raise ParseError(f"ring line missing field {exc}") from exc
    except ValueError as exc:
        raise ParseError(f"bad ring line {line!r}: {exc}") from exc


def format_presentation(p: PresentationMap) -> str:
    """Inverse of parse_presentation (entries printed without spaces)."""
    ring = p.target.ring
    out = [f"ring r={ring.num_vars} vardeg={ring.var_degree}"]
    out.append("target " + " ".join(str(d) for d in p.target.generator_degrees))
    out.append(f"matrix {p.target.rank} {p.source.rank}")
    for i in range(p.target.rank):
        out.append(" ".join(str(p.entry(i, j)).replace(" ", "") for j in range(p.source.rank)))
    return "\n".join(out) + "\n"
