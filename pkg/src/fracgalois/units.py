"""S-unit lattices for prime-power cyclotomic fields, their Stark-unit
submodules, and the finite quotient U/E as a Galois module.

Providers are exact generator lists (words); completeness of the built-in
provider is exactly the class-number-one input recorded in `assumptions`.
Coordinates of one unit against a generator list are found numerically from
the logarithmic embedding, rounded, and then verified exactly on words --
a wrong rounding can never produce a silently wrong module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import mpmath as mp

from .cyclo import factorize
from .fields import (PlaceSet, RelativeModel, SUnit, log_norms, make_field,
                     place_set, relative_model, relative_place_set)
from .gring import FiniteGModule
from .lfun import half_stickelberger

# prime powers with totally-real cyclotomic class number one (small range;
# each use is recorded as an explicit assumption in reports)
KNOWN_HPLUS_ONE = {3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41,
                   43, 47, 49, 53, 59, 61, 81, 121, 125, 169}

INT_ROUND_TOL_EXP = -16  # rounding guard for numeric unit coordinates


@dataclass
class UnitLattice:
    """Torsion generator + free generators of a finite-index S-unit group."""

    model: object                # FieldModel or RelativeModel
    pset: PlaceSet
    torsion_order: int
    torsion: SUnit
    free: tuple
    provider: str
    assumptions: tuple

    @property
    def group(self):
        return self.model.group

    @property
    def rank(self):
        return len(self.free)


# ---------------------------------------------------------------------------
# word constructors

def lambda_unit(f):
    return SUnit.one_minus_zeta(f, 1)


def stark_unit(f):
    """epsilon = (1 - zeta)(1 - zeta^{-1}), totally positive, in K^+."""
    return SUnit.one_minus_zeta(f, 1) * SUnit.one_minus_zeta(f, f - 1)


def cyclotomic_unit(f, a):
    """xi_a = zeta^{(1-a)/2} (1 - zeta^a) / (1 - zeta), a unit of K^+ for
    1 < a < f/2 prime to f; satisfies sigma_a(eps)/eps = xi_a^2."""
    from math import gcd
    if f % 2 == 0 or not 1 < a < f or gcd(a, f) != 1:
        raise ValueError("need odd f and 1 < a < f prime to f")
    inv2 = (f + 1) // 2
    return (SUnit.zeta(f, ((1 - a) * inv2) % f)
            * SUnit.one_minus_zeta(f, a) / SUnit.one_minus_zeta(f, 1))


def _prime_power(f):
    fact = factorize(f)
    if len(fact) != 1:
        raise ValueError(f"{f} is not a prime power")
    return fact[0]


# ---------------------------------------------------------------------------
# built-in providers (complete under h^+ = 1)

def _check_pset(model, pset, p):
    if pset.finite_primes() != [p]:
        raise ValueError(f"builtin unit provider needs S = {{infinity, {p}}}")


def sunit_group(model, pset, ctx, provider="builtin_hplus1"):
    """The full S-unit lattice U of the model (built-in or ingested)."""
    if provider != "builtin_hplus1":
        raise ValueError(f"unknown provider {provider!r}")
    if isinstance(model, RelativeModel):
        p, f = model.p, model.f
        _check_pset(model, pset, p)
        _require_hplus_one(f)
        torsion = SUnit.minus_one(f) * SUnit.zeta(f)
        free = tuple(lambda_unit(f).galois(model.group.label(h))
                     for h in model.group.elements)
        assumptions = (f"h+(Q(zeta_{f})) = 1",)
        u = UnitLattice(model, pset, 2 * f, torsion, free, provider, assumptions)
    else:
        p, n = _prime_power(model.f)
        if p == 2:
            raise ValueError("odd prime powers only")
        f = model.f
        _check_pset(model, pset, p)
        _require_hplus_one(f)
        xs = [a for a in range(2, (f + 1) // 2) if a % p]
        if model.totally_real and model.kernel == frozenset({1, f - 1}):
            torsion = SUnit.minus_one(f)
            free = tuple(cyclotomic_unit(f, a) for a in xs) + (stark_unit(f),)
            u = UnitLattice(model, pset, 2, torsion, free, provider,
                            (f"h+(Q(zeta_{f})) = 1",))
        elif model.is_full_cyclotomic:
            torsion = SUnit.minus_one(f) * SUnit.zeta(f)
            free = tuple(cyclotomic_unit(f, a) for a in xs) + (lambda_unit(f),)
            u = UnitLattice(model, pset, 2 * f, torsion, free, provider,
                            (f"h+(Q(zeta_{f})) = 1",))
        else:
            raise ValueError("builtin provider covers the full cyclotomic field "
                             "and its maximal real subfield only")
    _verify_rank(u, ctx)
    return u


def _require_hplus_one(f):
    if f not in KNOWN_HPLUS_ONE:
        raise ValueError(f"no class-number-one certificate for conductor {f}; "
                         "ingest an explicit unit basis instead")


def stark_module(model, pset, ctx):
    """The Stark submodule E of U: the Galois orbit of the distinguished unit
    over the same torsion (epsilon, lambda, or eta = lambda^{e theta~})."""
    if isinstance(model, RelativeModel):
        p, f = model.p, model.f
        _check_pset(model, pset, p)
        h = model.group
        beta = half_stickelberger(model) * (2 * f)  # e * theta~, integral
        assert beta.is_integral()
        eta = SUnit.one(f)
        for elem in h.elements:
            c = beta.coeff(elem)
            if c:
                eta = eta * lambda_unit(f).galois(h.label(elem)) ** int(c)
        torsion = SUnit.minus_one(f) * SUnit.zeta(f)
        free = tuple(eta.galois(h.label(e)) for e in h.elements)
        return UnitLattice(model, pset, 2 * f, torsion, free, "stark", ())
    p, n = _prime_power(model.f)
    f = model.f
    _check_pset(model, pset, p)
    g = model.group
    if model.totally_real and model.kernel == frozenset({1, f - 1}):
        eps = stark_unit(f)
        free = tuple(eps.galois(g.label(e)) for e in g.elements)
        return UnitLattice(model, pset, 2, SUnit.minus_one(f), free, "stark", ())
    if model.is_full_cyclotomic:
        lam = lambda_unit(f)
        free = tuple(lam.galois(g.label(e)) for e in g.elements)
        return UnitLattice(model, pset, 2 * f,
                           SUnit.minus_one(f) * SUnit.zeta(f), free, "stark", ())
    raise ValueError("Stark module supported for full cyclotomic / maximal real / relative")


def _log_matrix(lattice, ctx):
    return [log_norms(w, lattice.pset, ctx) for w in lattice.free]


def _verify_rank(lattice, ctx):
    rows = _log_matrix(lattice, ctx)
    need = lattice.pset.x_rank()
    if len(rows) < need:
        raise ValueError(f"provider gives rank {len(rows)} < {need}")
    with ctx.guard():
        r = _numeric_rank([row[:] for row in rows], mp.mpf(2) ** (-ctx.bits // 3))
    if r != len(rows):
        raise ValueError("free generators are multiplicatively dependent "
                         f"(numeric rank {r} < {len(rows)})")


def _numeric_rank(rows, tol):
    rows = [list(map(mp.mpf, r)) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    used = [False] * len(rows)
    for col in range(ncols):
        piv, pv = None, tol
        for i, row in enumerate(rows):
            if not used[i] and abs(row[col]) > pv:
                piv, pv = i, abs(row[col])
        if piv is None:
            continue
        used[piv] = True
        rank += 1
        for i, row in enumerate(rows):
            if i != piv and abs(row[col]) > 0:
                fac = row[col] / rows[piv][col]
                for j in range(ncols):
                    row[j] -= fac * rows[piv][j]
    return rank


# ---------------------------------------------------------------------------
# coordinates and the quotient module

class CoordinateError(ValueError):
    pass


def _torsion_value_table(lattice):
    table = {}
    t = SUnit.one(lattice.torsion.f)
    for k in range(lattice.torsion_order):
        v = t.expansion()
        table[(v.m, v.c)] = k
        t = t * lattice.torsion
    return table


def unit_coordinates(lattice: UnitLattice, word: SUnit, ctx, *, _cache=None):
    """(t, xs): word = torsion^t * prod free_i^{x_i}, verified exactly.

    The xs come from a numeric solve against the log embedding and must be
    within 2^-16 of integers; the torsion exponent is matched exactly on the
    expanded cyclotomic value. CoordinateError if the word is outside.
    """
    cache = _cache if _cache is not None else {}
    if "logm" not in cache:
        cache["logm"] = _log_matrix(lattice, ctx)
        cache["tors"] = _torsion_value_table(lattice)
    rows = cache["logm"]
    with ctx.guard():
        b = log_norms(word, lattice.pset, ctx)
        a = mp.matrix([[rows[j][i] for j in range(len(rows))]
                       for i in range(len(b))])
        at_a = a.T * a
        at_b = a.T * mp.matrix(b)
        sol = mp.lu_solve(at_a, at_b)
        xs = []
        rtol = mp.mpf(2) ** INT_ROUND_TOL_EXP
        for v in sol:
            r = mp.nint(v)
            if abs(v - r) > rtol:
                raise CoordinateError(
                    f"unit coordinate {mp.nstr(v, 12)} is not integral; "
                    "the word is outside the lattice or the provider is incomplete")
            xs.append(int(r))
    rest = word
    for w, x in zip(lattice.free, xs):
        if x:
            rest = rest / (w ** x)
    val = rest.expansion()
    key = (val.m, val.c)
    if key not in cache["tors"]:
        raise CoordinateError("residual word is not a torsion power; "
                              "numeric coordinates failed exact verification")
    return cache["tors"][key], xs


def quotient_module(u: UnitLattice, e: UnitLattice, ctx):
    """U/E as a FiniteGModule on generators (torsion, free_1, ..., free_r)."""
    assert u.group == e.group
    g = u.group
    k = 1 + len(u.free)
    cache = {}
    relations = []
    col = [0] * k
    col[0] = u.torsion_order
    relations.append(tuple(col))

    def coord_col(word):
        t, xs = unit_coordinates(u, word, ctx, _cache=cache)
        return tuple([t] + xs)

    relations.append(coord_col(e.torsion))
    for w in e.free:
        relations.append(coord_col(w))

    action = []
    for gen in g.generator_elements():
        t_res = g.label(gen)
        cols = [coord_col(u.torsion.galois(t_res))]
        for w in u.free:
            cols.append(coord_col(w.galois(t_res)))
        # column j = image of generator j
        action.append(tuple(tuple(cols[j][i] for j in range(k)) for i in range(k)))
    return FiniteGModule(g, k, relations, action)


# ---------------------------------------------------------------------------
# Stark residuals

def stark_residuals(model, pset, ctx):
    """max_sigma | log|sigma(eps)|_{w0} + e zeta'_S(0, sigma) | as mpf.

    Plus fields use the real absolute value at the distinguished place and
    e = 2; the relative case uses the square of the complex modulus and
    e = 2 p^n, with eta in place of eps.
    """
    from .lfun import partial_zeta_all, relative_partial_zeta_deriv
    if isinstance(model, RelativeModel):
        ew = 2 * model.f
        unit = stark_module(model, pset, ctx).free[0]
        # free[0] is eta at the identity conjugate
        zder = relative_partial_zeta_deriv(model, ctx)
        square = True
    else:
        ew = 2
        unit = stark_unit(model.f)
        zder = partial_zeta_all(model, pset, 1, ctx)
        square = False
    g = model.group
    out = {}
    with ctx.guard():
        for sigma in g.elements:
            w = unit.galois(g.label(sigma))
            x = abs(w.expansion().embed(1))
            lw = 2 * mp.log(x) if square else mp.log(x)
            out[sigma] = abs(lw + ew * zder[sigma])
        worst = max(out.values())
    return {g.label(s): ctx.final(v) for s, v in out.items()}, ctx.final(worst)


# ---------------------------------------------------------------------------
# unit file interchange

def export_units(lattice: UnitLattice, path):
    if isinstance(lattice.model, RelativeModel):
        fielddesc = {"relative": {"p": lattice.model.p, "n": lattice.model.n}}
    else:
        fielddesc = {"f": lattice.model.f, "kernel": sorted(lattice.model.kernel)}
    doc = {
        "kind": "sunits",
        "format": 1,
        "field": fielddesc,
        "s_primes": lattice.pset.finite_primes(),
        "torsion": {"order": lattice.torsion_order, "word": lattice.torsion.to_word()},
        "free": [w.to_word() for w in lattice.free],
        "provider": lattice.provider,
        "assumptions": list(lattice.assumptions),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_units(path, ctx):
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("kind") != "sunits":
        raise ValueError("not a unit file")
    fd = doc["field"]
    if "relative" in fd:
        model = relative_model(fd["relative"]["p"], fd["relative"]["n"])
        pset = relative_place_set(model)
        f = model.f
    else:
        f = fd["f"]
        model = make_field(f, frozenset(fd["kernel"]))
        pset = place_set(model, tuple(doc["s_primes"]))
    torsion = SUnit.from_word(f, doc["torsion"]["word"])
    order = int(doc["torsion"]["order"])
    tv = torsion.expansion()
    if order < 1 or not (tv ** order == 1):
        raise ValueError("torsion word does not have the declared order")
    for q, _ in factorize(order):
        if tv ** (order // q) == 1:
            raise ValueError("declared torsion order is not minimal")
    free = tuple(SUnit.from_word(f, w) for w in doc["free"])
    if not isinstance(model, RelativeModel):
        for w in free:
            if not w.fixed_by(model.kernel):
                raise ValueError("free generator is not fixed by the field's kernel")
    lattice = UnitLattice(model, pset, order, torsion, free,
                          str(doc.get("provider", "ingested")),
                          tuple(doc.get("assumptions", ())))
    _verify_rank(lattice, ctx)
    return lattice
