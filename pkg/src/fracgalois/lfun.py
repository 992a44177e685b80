"""Abelian L-function data at s = 0: exact values via generalized Bernoulli
numbers, derivatives via Hurwitz zeta, S-truncated partial zetas, and the
Stickelberger-type elements built from them.

Conventions: for a character chi of Gal(K/Q) = (Z/f)^x / H and a place set S
containing infinity, L_S(s, chi) carries Euler factors (1 - chi_0(p) p^{-s})
for the finite p in S prime to the conductor of chi. At s = 0 everything
rational is exact (Fractions / cyclotomic numbers); derivatives are mpf/mpc
under a PrecisionContext.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import mpmath as mp

from .cyclo import (CyclotomicNumber, _power_table, crt, euler_phi, factorize,
                    hurwitz_zeta_at0)
from .fields import FieldModel, PlaceSet, RelativeModel, make_field, place_set
from .gring import Character, GroupRingElement, assemble, characters


# ---------------------------------------------------------------------------
# characters of (Z/f)^x-quotients: conductor, primitive table, Bernoulli

def character_conductor(model: FieldModel, chi: Character):
    """Smallest d | f such that chi factors through (Z/d)^x."""
    f = model.f
    for d in sorted(_divisors(f)):
        kern = [model.group.element_of_residue(a) for a in range(1, f, d)
                if gcd(a, f) == 1]
        if chi.is_trivial_on(kern):
            return d
    raise AssertionError("unreachable: d = f always works")


def _divisors(n):
    out = [1]
    for p, e in factorize(n):
        out = [d * p ** k for d in out for k in range(e + 1)]
    return sorted(out)


def primitive_table(model: FieldModel, chi: Character):
    """(f0, {b mod f0 -> exponent}, E): values of the primitive chi_0.

    chi_0(b) = zeta_E ** table[b] for b coprime to the conductor f0; the
    exponent comes from chi at any lift of b that is prime to f.
    """
    f = model.f
    f0 = character_conductor(model, chi)
    e = model.group.exponent
    if f0 == 1:
        return 1, {1: 0}, e
    table = {}
    f_fact = factorize(f)
    for b in range(1, f0):
        if gcd(b, f0) != 1:
            continue
        congruences = []
        for p, ee in f_fact:
            q = p ** ee
            c = _val(f0, p)
            # lift b mod p^c into (Z/q)^x by reusing its small representative;
            # primes away from f0 get 1, keeping the lift coprime to f
            congruences.append((b % p ** c if c else 1, q))
        a = crt(congruences)
        assert gcd(a, f) == 1 and a % f0 == b
        table[b] = chi.exp_at(model.group.element_of_residue(a % f))
    return f0, table, e


def _val(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def bernoulli_b1(model: FieldModel, chi: Character, *, allow_imprimitive=False):
    """B_{1,chi} = sum_b chi(b) (b/f0 - 1/2), exact in Q(zeta_E).

    Defined through the primitive character; by default the input must
    already be primitive (conductor = f), otherwise this errors.
    """
    f0, table, e = primitive_table(model, chi)
    if f0 != model.f and not allow_imprimitive:
        raise ValueError(f"character has conductor {f0} < modulus {model.f}; "
                         "pass the primitive model or allow_imprimitive=True")
    phi = euler_phi(e)
    tab = _power_table(e)
    out = [Fraction(0)] * phi
    for b, k in table.items():
        w = Fraction(b, f0) - Fraction(1, 2) if f0 > 1 else Fraction(1, 2)
        row = tab[k]
        for j in range(phi):
            if row[j]:
                out[j] += w * row[j]
    return CyclotomicNumber(e, out)


def l_value_at_0(model: FieldModel, pset: PlaceSet, chi: Character):
    """Exact L_S(0, chi) = -B_{1,chi_0} * prod_{p in S, p coprime f0} (1 - chi_0(p))."""
    f0, table, e = primitive_table(model, chi)
    val = -bernoulli_b1(model, chi, allow_imprimitive=True)
    for q in pset.finite_primes():
        if f0 % q == 0:
            continue  # ramified: the Euler factor is already absent
        chi0_q = (CyclotomicNumber.root_of_unity(e, table[q % f0]) if f0 > 1
                  else CyclotomicNumber.rational(1))
        val = val * (1 - chi0_q)
    return val


# ---------------------------------------------------------------------------
# partial zetas

def _lift_modulus(model: FieldModel, pset: PlaceSet):
    F = model.f
    for q in pset.finite_primes():
        if F % q:
            F *= q
    return F


def partial_zeta_all(model: FieldModel, pset: PlaceSet, k, ctx=None):
    """{sigma -> zeta_S(0, sigma)} (k = 0, exact Fractions) or its s-derivative
    (k = 1, mpf at ctx). One pass over residues of the lifted modulus."""
    g = model.group
    F = _lift_modulus(model, pset)
    if k == 0:
        acc = {e: Fraction(0) for e in g.elements}
        for a in range(1, F):
            if gcd(a, F) != 1:
                continue
            acc[g.element_of_residue(a % model.f)] += Fraction(1, 2) - Fraction(a, F)
        return acc
    if k == 1:
        if ctx is None:
            raise ValueError("derivative needs a PrecisionContext")
        with ctx.guard():
            logf = mp.log(F)
            acc = {e: mp.mpf(0) for e in g.elements}
            for a in range(1, F):
                if gcd(a, F) != 1:
                    continue
                elem = g.element_of_residue(a % model.f)
                x = Fraction(a, F)
                acc[elem] += -logf * ctx.mpf(Fraction(1, 2) - x) \
                    + hurwitz_zeta_at0(x, 1, ctx)
        return {e: ctx.final(v) for e, v in acc.items()}
    raise ValueError("k must be 0 or 1")


def partial_zeta0(model, pset, sigma, k, ctx=None):
    return partial_zeta_all(model, pset, k, ctx)[sigma]


# ---------------------------------------------------------------------------
# Stickelberger-type elements

def stickelberger(model: FieldModel, pset: PlaceSet):
    """theta_S = sum_sigma zeta_S(0, sigma) sigma^{-1}, exact (zeta route)."""
    if isinstance(model, RelativeModel):
        if pset.finite_primes() != [model.p]:
            raise ValueError("relative theta is defined for S = {infinity, p}")
        vals = {chi: relative_l_value_at_0(model, chi.conj())
                for chi in characters(model.group)}
        return assemble(model.group, vals)
    g = model.group
    zet = partial_zeta_all(model, pset, 0)
    return GroupRingElement.from_dict(g, {g.inv(e): v for e, v in zet.items()})


def stickelberger_via_characters(model: FieldModel, pset: PlaceSet):
    """Same element assembled from exact L-values (slow cross-check route)."""
    vals = {}
    for chi in characters(model.group):
        vals[chi] = l_value_at_0(model, pset, chi.conj())
    return assemble(model.group, vals)


def stickelberger_classical(f):
    """sum_{a mod f} (a/f) sigma_a^{-1} on the full cyclotomic group."""
    model = make_field(f)
    g = model.group
    d = {}
    for a in range(1, f):
        if gcd(a, f) != 1:
            continue
        e = g.inv(g.element_of_residue(a))
        d[e] = d.get(e, Fraction(0)) + Fraction(a, f)
    return GroupRingElement.from_dict(g, d)


def half_stickelberger(model: RelativeModel):
    """theta~ = sum_{sigma in H} zeta_{S}(0, sigma) sigma^{-1} in Q[H],
    S = {infinity, p}; the partial zetas are those of the full field."""
    h = model.group
    f = model.f
    d = {}
    for a in range(1, f):
        if a % model.p == 0:
            continue
        try:
            e = h.element_of_residue(a)
        except ValueError:
            continue  # residue outside H
        d[h.inv(e)] = d.get(h.inv(e), Fraction(0)) + (Fraction(1, 2) - Fraction(a, f))
    return GroupRingElement.from_dict(h, d)


# ---------------------------------------------------------------------------
# orders of vanishing and leading terms

def vanishing_order(model: FieldModel, pset: PlaceSet, chi: Character):
    """r_S(chi) = #{v in S : chi trivial on D_v} - [chi trivial]."""
    r = sum(1 for pd in pset.places if chi.is_trivial_on(pd.decomposition))
    if chi.is_trivial():
        r -= 1
    return r


def l_deriv_at_0(model: FieldModel, pset: PlaceSet, chi: Character, ctx, _zcache=None):
    """L_S'(0, chi) = sum_sigma chi(sigma) zeta_S'(0, sigma), as mpc."""
    zder = _zcache if _zcache is not None else partial_zeta_all(model, pset, 1, ctx)
    g = model.group
    e = g.exponent
    with ctx.guard():
        total = mp.mpc(0)
        for elem, zv in zder.items():
            k = chi.exp_at(elem)
            total += mp.expjpi(mp.mpf(2 * k) / e) * zv
    return ctx.final(total)


def l_leading(model: FieldModel, pset: PlaceSet, chi: Character, ctx):
    """(r, leading coefficient) of L_S(s, chi) at s = 0; r <= 1 supported."""
    r = vanishing_order(model, pset, chi)
    if r == 0:
        return 0, l_value_at_0(model, pset, chi)
    if r == 1:
        return 1, l_deriv_at_0(model, pset, chi, ctx)
    raise NotImplementedError(f"order of vanishing r = {r} > 1: leading term not supported")


def l_deriv_primitive(model: FieldModel, chi: Character, ctx):
    """Untruncated L'(0, chi) for nontrivial chi, via the conductor-f0 sum
    L'(0, chi) = log(f0) B_{1,chi_0} + sum_b chi_0(b) zeta_H'(0, b/f0)."""
    if chi.is_trivial():
        raise ValueError("trivial character: use the zeta factorization instead")
    f0, table, e = primitive_table(model, chi)
    b1 = bernoulli_b1(model, chi, allow_imprimitive=True)
    with ctx.guard():
        total = mp.log(f0) * b1.embed(1)
        for b, k in table.items():
            total += mp.expjpi(mp.mpf(2 * k) / e) * hurwitz_zeta_at0(Fraction(b, f0), 1, ctx)
    return ctx.final(total)


# ---------------------------------------------------------------------------
# relative setting: K = Q(zeta_{p^n}) over k = Q(sqrt(-p))

def extend_character(model: RelativeModel, chi: Character, odd: bool):
    """Extend chi on H to the full group G with chi(c) = -1 (odd) or +1."""
    g_full = make_field(model.f).group
    h = model.group
    f = model.f
    e_h = h.exponent
    e_g = g_full.exponent
    assert e_g % e_h == 0 and e_g % 2 == 0
    step = e_g // e_h

    def value_exp(residue):
        # split sigma_a = h * c^j with h in H
        try:
            helem = h.element_of_residue(residue)
            j = 0
        except ValueError:
            helem = h.element_of_residue((residue * (f - 1)) % f)
            j = 1
        exp = chi.exp_at(helem) * step
        if odd and j:
            exp += e_g // 2
        return exp % e_g

    exps = []
    for gen, d in zip(g_full.generator_elements(), g_full.invariant_factors):
        eexp = value_exp(g_full.label(gen))
        t, r = divmod(eexp * d, e_g)
        assert r == 0, "extension is not a character"
        exps.append(t)
    out = Character(g_full, exps)
    for elem in g_full.elements:
        assert out.exp_at(elem) == value_exp(g_full.label(elem))
    return out


def relative_l_value_at_0(model: RelativeModel, chi: Character):
    """Exact L_{k,S}(0, chi) for S = {v_inf, frak_p}, via the induced pair:
    L_{k,S}(s, chi) = L_S(s, chi_even) L(s, chi_odd) over Q, with the single
    Euler factor at p carried by the even factor (the odd one is ramified)."""
    chi_even = extend_character(model, chi, odd=False)
    chi_odd = extend_character(model, chi, odd=True)
    k_full = make_field(model.f)
    even = l_value_at_0(k_full, place_set(k_full, (model.p,)), chi_even)
    odd = l_value_at_0(k_full, _no_finite_places(k_full), chi_odd)
    return even * odd


def relative_l_deriv(model: RelativeModel, chi: Character, ctx):
    """L'_{k,S}(0, chi) for S = {v_inf, frak_p}, via the factorization
    L_k(s, chi) = L(s, chi_even) L(s, chi_odd) over Q."""
    chi_even = extend_character(model, chi, odd=False)
    chi_odd = extend_character(model, chi, odd=True)
    k_full = make_field(model.f)
    # odd factor: nonvanishing exact value (conductor is p-power: no Euler factor)
    l_odd = l_value_at_0(k_full, _no_finite_places(k_full), chi_odd)
    with ctx.guard():
        if chi.is_trivial():
            # even factor is zeta(s)(1 - p^{-s}): derivative at 0 is -log(p)/2
            lead_even = -mp.log(model.p) / 2
        else:
            # chi_even is ramified only at p, which S removes; L(0)=0, use L'
            lead_even = l_deriv_primitive(k_full, chi_even, ctx)
        total = lead_even * l_odd.embed(1)
    return ctx.final(total)


def _no_finite_places(model: FieldModel):
    return place_set(model, ())


def relative_partial_zeta_deriv(model: RelativeModel, ctx):
    """{sigma in H -> zeta'_{k,S}(0, sigma)} by inverting the character sum."""
    h = model.group
    chars = characters(h)
    lvals = {chi: relative_l_deriv(model, chi, ctx) for chi in chars}
    e = h.exponent
    out = {}
    with ctx.guard():
        for sigma in h.elements:
            total = mp.mpc(0)
            for chi, lv in lvals.items():
                k = chi.exp_at(sigma)
                total += mp.expjpi(mp.mpf(-2 * k) / e) * lv
            total /= h.order
            assert abs(mp.im(total)) < mp.mpf(2) ** (-ctx.bits // 2)
            out[sigma] = mp.re(total)
    return {s: ctx.final(v) for s, v in out.items()}
