"""Free graded-commutative algebras with differential, and their cohomology.

Monomials are sorted words in the generators with Koszul-sign bookkeeping:
odd generators square to zero and anticommute, even generators are
polynomial.  Cohomology is computed degree by degree with exact rational
linear algebra; representatives come from a deterministic echelon choice,
so runs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import DomainError, ParseError, ValidationError
from .polyring import _TokenStream, tokenize


class SullivanModel:
    """Free graded-commutative algebra on named generators, with d of degree +1.

    `differential` maps generator index -> AlgebraElement (or zero element).
    d^2 = 0 is validated at construction; minimality (no linear terms in the
    image of d) is only warned about via `minimality_violations`.
    """

    def __init__(self, generators, differential=None, validate=True):
        self.generators = tuple((str(n), int(d)) for n, d in generators)
        if len({n for n, _ in self.generators}) != len(self.generators):
            raise ValidationError("duplicate generator names")
        for n, d in self.generators:
            if d < 1:
                raise ValidationError(f"generator {n} must have positive degree")
        self.name_to_index = {n: i for i, (n, _) in enumerate(self.generators)}
        diff = {}
        if differential:
            for key, val in differential.items():
                idx = key if isinstance(key, int) else self.name_to_index[key]
                diff[idx] = val
        self.differential = diff
        if validate:
            self._validate()

    def degree(self, i: int) -> int:
        return self.generators[i][1]

    def is_odd(self, i: int) -> bool:
        return self.degree(i) % 2 == 1

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {(): Fraction(1)})

    def gen(self, key) -> "AlgebraElement":
        idx = key if isinstance(key, int) else self.name_to_index[key]
        return AlgebraElement(self, {((idx, 1),): Fraction(1)})

    def d_of_gen(self, i: int) -> "AlgebraElement":
        return self.differential.get(i, self.zero())

    def d(self, elem: "AlgebraElement") -> "AlgebraElement":
        """Extend the differential by the graded Leibniz rule."""
        if elem.model is not self and elem.model.generators != self.generators:
            raise ValidationError("element from another model")
        out = self.zero()
        for mono, coeff in elem.terms.items():
            out = out + self._d_monomial(mono).scale(coeff)
        return out

    def _d_monomial(self, mono) -> "AlgebraElement":
        out = self.zero()
        prefix_deg = 0
        for pos, (g, e) in enumerate(mono):
            dg = self.d_of_gen(g)
            if not dg.is_zero():
                left = (mono[:pos] + ((g, e - 1),)) if e > 1 else mono[:pos]
                right = mono[pos + 1 :]
                piece = AlgebraElement(self, {left: Fraction(e)})
                piece = piece * dg
                piece = piece * AlgebraElement(self, {right: Fraction(1)})
                sign = -1 if prefix_deg % 2 else 1
                out = out + piece.scale(sign)
            prefix_deg += e * self.degree(g)
        return out

    def _validate(self):
        for i in range(len(self.generators)):
            dg = self.d_of_gen(i)
            if dg.is_zero():
                continue
            want = self.degree(i) + 1
            if dg.degree() != want or not dg.is_homogeneous():
                raise ValidationError(
                    f"d({self.generators[i][0]}) must be homogeneous of degree {want}"
                )
            dd = self.d(dg)
            if not dd.is_zero():
                raise ValidationError(
                    f"d^2 != 0 on generator {self.generators[i][0]}: d(d) = {dd}"
                )

    def minimality_violations(self):
        """Generators whose differential has a linear term (warn-only)."""
        bad = []
        for i in range(len(self.generators)):
            for mono in self.d_of_gen(i).terms:
                if len(mono) == 1 and mono[0][1] == 1:
                    bad.append(self.generators[i][0])
                    break
        return bad

    def all_odd(self) -> bool:
        return all(self.is_odd(i) for i in range(len(self.generators)))

    def top_degree(self):
        """Top degree of the algebra when every generator is odd, else None."""
        if not self.all_odd():
            return None
        return sum(d for _, d in self.generators)

    def monomial_basis(self, degree: int):
        """All monomials of the given total degree, deterministically ordered."""
        out = []

        def rec(idx, remaining, word):
            if remaining == 0:
                out.append(tuple(word))
                return
            if idx == len(self.generators):
                return
            rec(idx + 1, remaining, word)
            gdeg = self.degree(idx)
            cap = 1 if self.is_odd(idx) else remaining // gdeg
            for e in range(1, cap + 1):
                if e * gdeg <= remaining:
                    rec(idx + 1, remaining - e * gdeg, word + [(idx, e)])

        rec(0, degree, [])
        return sorted(out)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, SullivanModel)
            and self.generators == other.generators
            and {i: e.terms for i, e in self.differential.items() if not e.is_zero()}
            == {i: e.terms for i, e in other.differential.items() if not e.is_zero()}
        )

    def __repr__(self):
        gens = ", ".join(f"{n}^{d}" for n, d in self.generators)
        return f"SullivanModel({gens})"


def _mul_monomials(model, m1, m2):
    """Product of sorted monomials: (monomial, sign) or None when it dies."""
    sign = 1
    # Koszul sign: odd letters of m1 that must move past odd letters of m2.
    odd1 = [g for g, e in m1 if model.is_odd(g)]
    odd2 = [g for g, e in m2 if model.is_odd(g)]
    for a in odd1:
        for b in odd2:
            if a > b:
                sign = -sign
            elif a == b:
                return None
    merged = {}
    for g, e in m1:
        merged[g] = merged.get(g, 0) + e
    for g, e in m2:
        merged[g] = merged.get(g, 0) + e
    for g, e in merged.items():
        if model.is_odd(g) and e > 1:
            return None
    return tuple(sorted(merged.items())), sign


class AlgebraElement:
    """Q-linear combination of sorted monomials in one model's generators."""

    __slots__ = ("model", "terms")

    def __init__(self, model: SullivanModel, terms: dict):
        self.model = model
        self.terms = {m: c for m, c in terms.items() if c != 0}

    def is_zero(self) -> bool:
        return not self.terms

    def monomial_degree(self, mono) -> int:
        return sum(e * self.model.degree(g) for g, e in mono)

    def is_homogeneous(self) -> bool:
        return len({self.monomial_degree(m) for m in self.terms}) <= 1

    def degree(self):
        if not self.terms:
            return None
        return max(self.monomial_degree(m) for m in self.terms)

    def homogeneous_part(self, degree: int) -> "AlgebraElement":
        return AlgebraElement(
            self.model,
            {m: c for m, c in self.terms.items() if self.monomial_degree(m) == degree},
        )

    def __add__(self, other):
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return AlgebraElement(self.model, terms)

    def __neg__(self):
        return AlgebraElement(self.model, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        if c == 0:
            return AlgebraElement(self.model, {})
        return AlgebraElement(self.model, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                hit = _mul_monomials(self.model, m1, m2)
                if hit is None:
                    continue
                mono, sign = hit
                s = terms.get(mono, 0) + sign * c1 * c2
                if s:
                    terms[mono] = s
                else:
                    terms.pop(mono, None)
        return AlgebraElement(self.model, terms)

    __rmul__ = __mul__

    def power(self, n: int) -> "AlgebraElement":
        acc = AlgebraElement(self.model, {(): Fraction(1)})
        for _ in range(n):
            acc = acc * self
        return acc

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and (self.model is other.model or self.model.generators == other.model.generators)
            and self.terms == other.terms
        )

    def __str__(self):
        if not self.terms:
            return "0"
        def mono_str(m):
            if not m:
                return "1"
            parts = []
            for g, e in m:
                name = self.model.generators[g][0]
                parts.append(name if e == 1 else f"{name}^{e}")
            return "*".join(parts)

        keys = sorted(self.terms, key=lambda m: (self.monomial_degree(m), m))
        chunks = []
        for m in keys:
            c = self.terms[m]
            mag = abs(c)
            body = mono_str(m)
            if body == "1":
                body = _frac(mag)
            elif mag != 1:
                body = f"{_frac(mag)}*{body}"
            if not chunks:
                chunks.append(body if c > 0 else "-" + body)
            else:
                chunks.append((" + " if c > 0 else " - ") + body)
        return "".join(chunks)

    def __repr__(self):
        return f"AlgebraElement({self})"


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# Cohomology.

MAX_BASIS_CAPACITY = 200000


class CohomologyRing:
    """Betti numbers, representative cycles and products up to a cutoff."""

    def __init__(self, model: SullivanModel, cutoff: int):
        self.model = model
        self.cutoff = cutoff
        self.basis = {}
        total = 0
        for p in range(cutoff + 2):
            self.basis[p] = model.monomial_basis(p)
            total += len(self.basis[p])
            if total > MAX_BASIS_CAPACITY:
                raise DomainError("cutoff exceeds the basis capacity cap")
        self.index = {p: {m: k for k, m in enumerate(self.basis[p])} for p in self.basis}
        self._coboundaries = {}
        self._reps = {}
        self.betti = []
        for p in range(cutoff + 1):
            cob = linalg.Subspace(len(self.basis[p]))
            if p >= 1:
                for m in self.basis[p - 1]:
                    img = model.d(AlgebraElement(model, {m: Fraction(1)}))
                    cob.add(self._vector(img, p))
            self._coboundaries[p] = cob
            kernel = self._cocycle_basis(p)
            reps = []
            span = linalg.Subspace(len(self.basis[p]))
            for row in cob.rows:
                span.add(row)
            for vec in kernel:
                red = span.reduce(vec)
                if any(x != 0 for x in red):
                    span.add(red)
                    reps.append(red)
            self._reps[p] = reps
            self.betti.append(len(reps))

    def _vector(self, elem: AlgebraElement, degree: int):
        vec = [Fraction(0)] * len(self.basis[degree])
        for m, c in elem.terms.items():
            if elem.monomial_degree(m) != degree:
                raise ValueError("element not homogeneous of the expected degree")
            vec[self.index[degree][m]] += c
        return vec

    def _element(self, vec, degree: int) -> AlgebraElement:
        return AlgebraElement(
            self.model,
            {m: c for m, c in zip(self.basis[degree], vec) if c != 0},
        )

    def _cocycle_basis(self, p: int):
        rows = []
        target = self.basis[p + 1]
        tindex = self.index[p + 1]
        columns = []
        for m in self.basis[p]:
            img = self.model.d(AlgebraElement(self.model, {m: Fraction(1)}))
            col = [Fraction(0)] * len(target)
            for mm, c in img.terms.items():
                col[tindex[mm]] += c
            columns.append(col)
        mat = [[columns[j][i] for j in range(len(columns))] for i in range(len(target))]
        return linalg.kernel_basis(mat, len(self.basis[p]))

    def dim(self, p: int) -> int:
        return self.betti[p] if 0 <= p <= self.cutoff else 0

    def representatives(self, p: int):
        return [self._element(v, p) for v in self._reps.get(p, [])]

    def is_cocycle(self, elem: AlgebraElement) -> bool:
        return self.model.d(elem).is_zero()

    def coordinates(self, elem: AlgebraElement):
        """Coordinates of a homogeneous cocycle's class in the chosen basis."""
        if elem.is_zero():
            return None, []
        if not elem.is_homogeneous():
            raise ValueError("need a homogeneous element")
        p = elem.degree()
        if p > self.cutoff:
            raise ValueError(f"degree {p} beyond cutoff {self.cutoff}")
        if not self.is_cocycle(elem):
            raise ValueError("element is not a cocycle")
        red = self._coboundaries[p].reduce(self._vector(elem, p))
        if all(x == 0 for x in red):
            return p, [Fraction(0)] * self.betti[p]
        coeffs = linalg.solve(self._reps[p], red)
        if coeffs is None:
            raise ValueError("representative basis failed to span; internal error")
        return p, coeffs

    def class_is_zero(self, elem: AlgebraElement) -> bool:
        p, coords = self.coordinates(elem)
        return p is None or all(c == 0 for c in coords)

    def product_coordinates(self, p: int, a: int, q: int, b: int):
        """Class coordinates of representatives(p)[a] * representatives(q)[b]."""
        prod = self.representatives(p)[a] * self.representatives(q)[b]
        if prod.is_zero():
            return [Fraction(0)] * self.dim(p + q)
        return self.coordinates(prod)[1]


def cohomology(model: SullivanModel, cutoff: int = None) -> CohomologyRing:
    """Cohomology with products up to `cutoff`.

    The cutoff defaults to the top degree for a model on odd generators
    only; models with even generators must say how far to look.
    """
    if cutoff is None:
        cutoff = model.top_degree()
        if cutoff is None:
            raise DomainError("cutoff is mandatory when even generators are present")
    return CohomologyRing(model, cutoff)


def formal_dimension(h: CohomologyRing) -> int:
    top = 0
    for p in range(h.cutoff + 1):
        if h.dim(p):
            top = p
    return top


def euler_characteristic(h: CohomologyRing) -> int:
    return sum((-1) ** p * h.dim(p) for p in range(h.cutoff + 1))


# ---------------------------------------------------------------------------
# The c-symplectic test.


@dataclass
class CSymplecticReport:
    is_csymplectic: object  # True / False / None ("unknown")
    n: int
    omega_used: object
    lefschetz_type: object
    poincare_duality: bool
    detail: str


def _pairing_matrix(h, p, q, top_index):
    rows = []
    for a in range(h.dim(p)):
        row = []
        for b in range(h.dim(q)):
            coords = h.product_coordinates(p, a, q, b)
            row.append(coords[top_index] if coords else Fraction(0))
        rows.append(row)
    return rows


def poincare_duality_holds(h: CohomologyRing, fd: int) -> bool:
    if h.dim(fd) != 1:
        return False
    for p in range(fd + 1):
        q = fd - p
        if h.dim(p) != h.dim(q):
            return False
        mat = _pairing_matrix(h, p, q, 0)
        if h.dim(p) and linalg.rank(mat) != h.dim(p):
            return False
    return True


def _omega_candidates(h: CohomologyRing):
    reps = h.representatives(2)
    for rep in reps:
        yield rep
    m = min(len(reps), 3)
    if m >= 2:
        for coeffs in _tuples([-2, -1, 0, 1, 2], m):
            if all(c == 0 for c in coeffs):
                continue
            acc = h.model.zero()
            for c, rep in zip(coeffs, reps[:m]):
                acc = acc + rep.scale(c)
            yield acc
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    if reps:
        acc = h.model.zero()
        for k, rep in enumerate(reps):
            acc = acc + rep.scale(primes[k % len(primes)])
        yield acc


def _tuples(values, length):
    if length == 0:
        yield ()
        return
    for head in values:
        for tail in _tuples(values, length - 1):
            yield (head,) + tail


def c_symplectic_check(h: CohomologyRing, omega: AlgebraElement = None) -> CSymplecticReport:
    """Test for a degree-2 class whose n-th power generates the top degree.

    Poincare duality of the whole ring is verified first.  With no omega
    supplied, a deterministic search tries basis classes, small integer
    combinations, then one prime-weighted combination; exhausting the
    policy reports "unknown" (None), never "false".
    """
    fd = formal_dimension(h)
    if fd % 2:
        raise DomainError(f"formal dimension {fd} is odd")
    n = fd // 2
    pd = poincare_duality_holds(h, fd)
    if not pd:
        return CSymplecticReport(False, n, None, None, False, "Poincare duality fails")

    def omega_works(cand):
        if cand.is_zero() or cand.degree() != 2 or not cand.is_homogeneous():
            return False
        if not h.is_cocycle(cand):
            return False
        return not h.class_is_zero(cand.power(n))

    if omega is not None:
        ok = omega_works(omega)
        lef = _lefschetz(h, omega, n, fd) if ok else None
        return CSymplecticReport(
            ok, n, omega if ok else None, lef, True,
            "supplied omega works" if ok else "supplied omega has vanishing top power",
        )
    for cand in _omega_candidates(h):
        if omega_works(cand):
            return CSymplecticReport(
                True, n, cand, _lefschetz(h, cand, n, fd), True, "omega found by search"
            )
    return CSymplecticReport(None, n, None, None, True, "no omega found by the search policy")


def _lefschetz(h: CohomologyRing, omega: AlgebraElement, n: int, fd: int):
    """Is multiplication by omega^(n-1): H^1 -> H^(2n-1) bijective?"""
    if h.dim(1) != h.dim(fd - 1):
        return False
    if h.dim(1) == 0:
        return True
    power = omega.power(n - 1)
    cols = []
    for rep in h.representatives(1):
        prod = power * rep
        if prod.is_zero():
            cols.append([Fraction(0)] * h.dim(fd - 1))
        else:
            cols.append(h.coordinates(prod)[1])
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(h.dim(fd - 1))]
    return linalg.rank(mat) == h.dim(1)


# ---------------------------------------------------------------------------
# Model files.


def parse_algebra_expression(text, model: SullivanModel, pos_offset=0):
    """Algebra expression: the polynomial grammar with generator names."""
    ts = _TokenStream(tokenize(text), len(text))
    result = model.zero()
    sign = 1
    lead = ts.accept_op("+", "-")
    if lead == "-":
        sign = -1
    while True:
        result = result + _parse_alg_term(ts, model).scale(sign)
        op = ts.accept_op("+", "-")
        if op is None:
            break
        sign = 1 if op == "+" else -1
    kind, val, pos = ts.peek()
    if kind is not None:
        raise ParseError(f"trailing input {val!r}", pos + pos_offset)
    return result


def _parse_alg_term(ts, model):
    kind, val, pos = ts.peek()
    if kind is None:
        raise ParseError("expected a term", pos)
    if kind == "int":
        coeff = _parse_alg_coeff(ts)
        out = model.one().scale(coeff)
        while ts.accept_op("*"):
            out = out * _parse_alg_factor(ts, model)
        return out
    if kind == "name":
        out = _parse_alg_factor(ts, model)
        while ts.accept_op("*"):
            kind2, _, _ = ts.peek()
            if kind2 == "int":
                out = out.scale(_parse_alg_coeff(ts))
            else:
                out = out * _parse_alg_factor(ts, model)
        return out
    raise ParseError(f"expected a term, found {val!r}", pos)


def _parse_alg_coeff(ts):
    kind, val, pos = ts.next()
    if kind != "int":
        raise ParseError("expected an integer", pos)
    if ts.accept_op("/"):
        kind2, den, pos2 = ts.next()
        if kind2 != "int" or den == 0:
            raise ParseError("expected a nonzero denominator", pos2)
        return Fraction(val, den)
    return Fraction(val)


def _parse_alg_factor(ts, model):
    kind, name, pos = ts.next()
    if kind != "name":
        raise ParseError(f"expected a generator, found {name!r}", pos)
    if name not in model.name_to_index:
        raise ParseError(f"unknown generator {name!r}", pos)
    exp = 1
    if ts.accept_op("^"):
        kind2, e, pos2 = ts.next()
        if kind2 != "int":
            raise ParseError("expected an exponent", pos2)
        exp = e
    return model.gen(name).power(exp)


def _model_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_model(text: str) -> SullivanModel:
    """Parse "gen <name> deg=<int>" and "d <name> = <expr|0>" lines."""
    model, torus = _parse_model_and_torus(text)
    if torus is not None:
        raise ParseError("file has a torus block; use parse_extension")
    return model


def _parse_model_and_torus(text):
    gens = []
    d_lines = []
    torus_rank = None
    big_d_lines = []
    for lineno, line in _model_lines(text):
        toks = line.split(None, 1)
        head = toks[0]
        if head == "gen":
            parts = line.split()
            if len(parts) != 3 or not parts[2].startswith("deg="):
                raise ParseError(f"line {lineno}: expected 'gen <name> deg=<int>'")
            gens.append((parts[1], int(parts[2][4:])))
        elif head == "d":
            name, expr = _split_assignment(line[1:], lineno)
            d_lines.append((lineno, name, expr))
        elif head == "torus":
            parts = line.split()
            if len(parts) != 2 or not parts[1].startswith("r="):
                raise ParseError(f"line {lineno}: expected 'torus r=<int>'")
            torus_rank = int(parts[1][2:])
        elif head == "D":
            name, expr = _split_assignment(line[1:], lineno)
            big_d_lines.append((lineno, name, expr))
        else:
            raise ParseError(f"line {lineno}: unknown directive {head!r}")
    if not gens:
        raise ParseError("model file declares no generators")
    bare = SullivanModel(gens, validate=False)
    diff = {}
    for lineno, name, expr in d_lines:
        if name not in bare.name_to_index:
            raise ParseError(f"line {lineno}: unknown generator {name!r}")
        value = bare.zero() if expr.strip() == "0" else parse_algebra_expression(expr, bare)
        diff[name] = value
    try:
        model = SullivanModel(gens, diff)
    except ValidationError as exc:
        raise ValidationError(f"invalid differential: {exc}") from exc
    torus = None
    if torus_rank is not None:
        torus = (torus_rank, big_d_lines)
    elif big_d_lines:
        raise ParseError("'D' lines need a 'torus r=...' line")
    return model, torus


def _split_assignment(rest, lineno):
    if "=" not in rest:
        raise ParseError(f"line {lineno}: expected '<name> = <expression>'")
    name, expr = rest.split("=", 1)
    return name.strip(), expr.strip()


@dataclass
class ActionExtension:
    """Degree-2 polynomial extension of a base model, with differential D.

    `extended` places the polynomial generators X1..Xr at indices 0..r-1
    and the base generators after them; D is the extended model's
    differential.  D is R-linear by construction (D X_i = 0) and projects
    onto the base differential when every X_i is set to zero.
    """

    base: SullivanModel
    torus_rank: int
    extended: SullivanModel

    @property
    def offset(self) -> int:
        return self.torus_rank

    def embed_monomial(self, mono):
        return tuple((g + self.offset, e) for g, e in mono)

    def embed(self, elem: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(
            self.extended, {self.embed_monomial(m): c for m, c in elem.terms.items()}
        )

    def split_monomial(self, mono):
        """Extended monomial -> (X exponent tuple, base monomial)."""
        alpha = [0] * self.torus_rank
        base = []
        for g, e in mono:
            if g < self.offset:
                alpha[g] = e
            else:
                base.append((g - self.offset, e))
        return tuple(alpha), tuple(base)

    def D(self, elem: AlgebraElement) -> AlgebraElement:
        return self.extended.d(elem)


def make_extension(base: SullivanModel, torus_rank: int, big_d: dict) -> ActionExtension:
    """Assemble and validate an extension; big_d maps base gen name -> element
    of the extended algebra (omitted generators keep their base differential)."""
    if torus_rank < 1:
        raise ValidationError("torus rank must be >= 1")
    xnames = [f"X{i + 1}" for i in range(torus_rank)]
    for n, _ in base.generators:
        if n in xnames:
            raise ValidationError(f"generator name {n} collides with a torus variable")
    gens = [(n, 2) for n in xnames] + list(base.generators)
    skeleton = SullivanModel(gens, validate=False)
    diff = {}
    for i, (name, _) in enumerate(base.generators):
        if name in big_d:
            diff[torus_rank + i] = big_d[name]
        else:
            embedded = AlgebraElement(
                skeleton,
                {
                    tuple((g + torus_rank, e) for g, e in m): c
                    for m, c in base.d_of_gen(i).terms.items()
                },
            )
            diff[torus_rank + i] = embedded
    try:
        extended = SullivanModel(gens, diff)
    except ValidationError as exc:
        raise ValidationError(f"invalid extension differential: {exc}") from exc
    ext = ActionExtension(base, torus_rank, extended)
    _validate_extension(ext)
    return ext


def _validate_extension(ext: ActionExtension):
    # D must project onto d when the X variables are killed.
    for i in range(len(ext.base.generators)):
        name = ext.base.generators[i][0]
        dval = ext.extended.d_of_gen(ext.offset + i)
        projected = {}
        for mono, c in dval.terms.items():
            alpha, basem = ext.split_monomial(mono)
            if all(a == 0 for a in alpha):
                projected[basem] = projected.get(basem, Fraction(0)) + c
        base_d = {m: c for m, c in ext.base.d_of_gen(i).terms.items()}
        if projected != base_d:
            raise ValidationError(
                f"D({name}) does not project onto d({name}) modulo the torus variables"
            )


def parse_extension(text: str) -> ActionExtension:
    """Parse a model file that carries a torus block."""
    base, torus = _parse_model_and_torus(text)
    if torus is None:
        raise ParseError("file has no 'torus r=...' line; use parse_model")
    torus_rank, big_d_lines = torus
    xnames = [f"X{i + 1}" for i in range(torus_rank)]
    gens = [(n, 2) for n in xnames] + list(base.generators)
    skeleton = SullivanModel(gens, validate=False)
    big_d = {}
    for lineno, name, expr in big_d_lines:
        if name not in base.name_to_index:
            raise ParseError(f"line {lineno}: unknown generator {name!r}")
        value = skeleton.zero() if expr.strip() == "0" else parse_algebra_expression(expr, skeleton)
        big_d[name] = value
    return make_extension(base, torus_rank, big_d)
