"""Command-line front end: compute exact objects, run verification suites,
and exchange unit / class-group documents.

Subcommands::

    fracgalois compute {theta,half_theta,lvalues,rvec,jideal,annihilator} ...
    fracgalois verify --suite CHECK[,CHECK...] ...
    fracgalois ingest --in FILE ...
    fracgalois export --out FILE [--in FILE] ...

Exit codes: 0 success (all checks pass), 1 at least one check fails,
2 configuration or computation error.

Reports keep exact values (rationals, lattices) and numeric values (with
their precision context) in separate sections; the only nondeterministic
content (a timestamp) lives in the `meta` block, so identical configuration
and inputs reproduce the report byte for byte outside `meta`.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys
from dataclasses import asdict, dataclass

import mpmath as mp

from .cyclo import PrecisionContext, factorize
from .fields import (RelativeModel, full_cyclotomic, make_field, place_set,
                     plus_field, relative_model, relative_place_set)
from .gring import characters
from .jideal import (CHECK_IDS, _gre_jsonable, j_full_cyclotomic,
                     j_via_theorem, load_classgroup, run_check)
from .lfun import (half_stickelberger, l_value_at_0, stickelberger,
                   vanishing_order)
from .units import (export_units, load_units, quotient_module, stark_module,
                    sunit_group)

COMPUTE_OBJECTS = ("theta", "half_theta", "lvalues", "rvec", "jideal",
                   "annihilator")

LOG2_10 = math.log2(10)


@dataclass
class RunConfig:
    """Everything a run depends on; a report embeds it verbatim."""

    command: str
    object: str | None = None
    suite: tuple = ()
    conductor: int | None = None
    prime: int | None = None
    level: int = 1
    subfield: str = "full"
    places: tuple | None = None
    bits: int = 192
    tol_exp: int = -30          # decimal exponent: tolerance is 10**tol_exp
    provider: str = "builtin"
    input_path: str | None = None
    output_path: str | None = None
    seed: int = 0

    def context(self):
        """Precision context at `bits` with tolerance 10**tol_exp (converted
        to the binary exponent; raises ValueError when unreachable)."""
        if self.tol_exp >= 0:
            raise ValueError("tolerance exponent must be negative")
        return PrecisionContext(bits=self.bits,
                                tol_exp=math.floor(self.tol_exp * LOG2_10))

    def as_dict(self):
        d = asdict(self)
        d["suite"] = list(self.suite)
        d["places"] = None if self.places is None else list(self.places)
        return d


# ---------------------------------------------------------------------------
# field resolution

def _conductor(cfg):
    if cfg.conductor is not None and cfg.prime is not None:
        if cfg.conductor != cfg.prime ** cfg.level:
            raise ValueError(
                f"--conductor {cfg.conductor} contradicts "
                f"--prime {cfg.prime} --level {cfg.level}")
        return cfg.conductor
    if cfg.conductor is not None:
        return cfg.conductor
    if cfg.prime is not None:
        return cfg.prime ** cfg.level
    raise ValueError("specify the field: --conductor/-f or --prime/-p")


def _prime_level(cfg):
    """(p, n) for checks that live on prime-power conductors."""
    if cfg.prime is not None:
        return cfg.prime, cfg.level
    f = _conductor(cfg)
    fac = factorize(f)
    if len(fac) != 1:
        raise ValueError(f"conductor {f} is not a prime power; "
                         "pass --prime/-p and --level/-n")
    (p, n), = fac
    return p, n


def resolve_field(cfg):
    """(model, place set) from the CLI selectors."""
    if cfg.subfield == "relative":
        p, n = _prime_level(cfg)
        model = relative_model(p, n)
        if cfg.places is not None:
            raise ValueError("the relative construction fixes its own places")
        return model, relative_place_set(model)
    f = _conductor(cfg)
    if cfg.subfield == "full":
        model = full_cyclotomic(f)
    elif cfg.subfield == "plus":
        model = plus_field(f)
    elif cfg.subfield.startswith("custom:"):
        residues = frozenset(int(a) for a in cfg.subfield[7:].split(","))
        model = make_field(f, residues)
    else:
        raise ValueError(f"unknown subfield selector {cfg.subfield!r}; "
                         "use full, plus, relative or custom:<residues>")
    if cfg.places is not None:
        primes = cfg.places
    else:
        primes = tuple(p for p, _ in factorize(f))
    return model, place_set(model, primes)


def _units_for(cfg, model, pset, ctx):
    """S-unit lattice per --provider (builtin tables or an ingested file)."""
    if cfg.provider == "builtin":
        return sunit_group(model, pset, ctx)
    if cfg.provider == "file":
        if cfg.input_path is None:
            raise ValueError("--provider file needs --in <units.json>")
        lattice = load_units(cfg.input_path, ctx)
        if lattice.model != model:
            raise ValueError(f"unit file is for {lattice.model!r}, "
                             f"not {model!r}")
        if lattice.pset.finite_primes() != pset.finite_primes():
            raise ValueError("unit file was built for different S-primes")
        return lattice
    raise ValueError(f"unknown provider {cfg.provider!r}")


# ---------------------------------------------------------------------------
# compute

def _chi_key(chi):
    return "chi[" + ",".join(str(e) for e in chi.exps) + "]"


def _cyclo_jsonable(val):
    return {"zeta_order": val.m, "coeffs": [str(c) for c in val.c]}


def cmd_compute(cfg):
    ctx = cfg.context()
    exact = {}
    numeric = {}
    if cfg.object == "half_theta":
        p, n = _prime_level(cfg)
        model = relative_model(p, n)
        tt = half_stickelberger(model)
        exact["half_theta"] = _gre_jsonable(tt)
        numeric["half_theta"] = {
            str(model.group.label(e)): mp.nstr(ctx.mpf(tt.coeff(e)), 17)
            for e in model.group.elements}
    elif cfg.object == "theta":
        model, pset = resolve_field(cfg)
        if isinstance(model, RelativeModel):
            raise ValueError("theta lives on absolute fields; "
                             "use half_theta for the relative case")
        theta = stickelberger(model, pset)
        exact["theta"] = _gre_jsonable(theta)
        numeric["theta"] = {
            str(model.group.label(e)): mp.nstr(ctx.mpf(theta.coeff(e)), 17)
            for e in model.group.elements}
    elif cfg.object == "lvalues":
        model, pset = resolve_field(cfg)
        if isinstance(model, RelativeModel):
            raise ValueError("lvalues lives on absolute fields")
        vals = {}
        nums = {}
        for chi in characters(model.group):
            v = l_value_at_0(model, pset, chi)
            key = _chi_key(chi)
            vals[key] = _cyclo_jsonable(v)
            with ctx.guard():
                emb = v.embed(1)
            nums[key] = mp.nstr(ctx.final(emb), 17)
        exact["l_values_at_0"] = vals
        numeric["l_values_at_0"] = nums
    elif cfg.object == "rvec":
        model, pset = resolve_field(cfg)
        exact["vanishing_orders"] = {
            _chi_key(chi): vanishing_order(model, pset, chi)
            for chi in characters(model.group)}
    elif cfg.object == "jideal":
        res = _compute_j(cfg, ctx)
        exact["ideal"] = res.ideal.to_jsonable()
        exact["details"] = {k: (list(v) if isinstance(v, tuple) else v)
                            for k, v in res.details.items()}
        exact["route"] = res.route
        exact["assumptions"] = list(res.assumptions)
    elif cfg.object == "annihilator":
        model, pset = resolve_field(cfg)
        u = _units_for(cfg, model, pset, ctx)
        m = quotient_module(u, stark_module(model, pset, ctx), ctx)
        exact["annihilator"] = m.annihilator().to_jsonable()
        exact["quotient_order"] = m.order()
        exact["quotient_structure"] = list(m.structure())
        exact["assumptions"] = list(u.assumptions)
    else:
        raise ValueError(f"unknown compute object {cfg.object!r}")
    numeric["context"] = ctx.as_dict()
    return {"exact": exact, "numeric": numeric}


def _compute_j(cfg, ctx):
    if cfg.subfield == "full":
        p, n = _prime_level(cfg)
        units = None
        if cfg.provider == "file":
            model, pset = resolve_field(cfg)
            units = _units_for(cfg, model, pset, ctx)
        return j_full_cyclotomic(p, n, ctx, units=units)
    model, pset = resolve_field(cfg)
    units = _units_for(cfg, model, pset, ctx) if cfg.provider == "file" else None
    return j_via_theorem(model, pset, ctx, units=units)


# ---------------------------------------------------------------------------
# verify

def _check_params(cfg, check_id):
    """Parameter dicts (one per run) for a check id under this config."""
    if check_id == "STICK_IDENT":
        return [{"f": _conductor(cfg)}]
    if check_id == "ACNF":
        return [{"field": "Q"}, {"field": "Qsqrt5"}]
    p, n = _prime_level(cfg)
    if check_id in ("QNAT", "JREL", "BCH", "STARK_RAT"):
        return [{"p": p, "n": n}]
    if check_id == "INDF":
        return [{"p": p, "n": n, "seed": cfg.seed}]
    if check_id == "RZERO":
        sub = cfg.subfield if cfg.subfield in ("full", "plus", "relative") else "plus"
        return [{"p": p, "n": n, "subfield": sub}]
    if check_id == "STARKC":
        sub = cfg.subfield if cfg.subfield in ("plus", "relative") else "plus"
        return [{"p": p, "n": n, "subfield": sub}]
    if check_id in ("CLCONT", "CG_FIT"):
        if cfg.input_path is None:
            raise ValueError(
                f"{check_id} needs class-group data: pass --in <classgroup.json>")
        clmod, _ = load_classgroup(cfg.input_path)
        order = clmod.order()
        ells = sorted({q for q, _ in factorize(order) if q % 2 == 1})
        if not ells:
            ells = [3]
        sub = "full" if check_id == "CLCONT" and cfg.subfield == "full" else "plus"
        out = []
        for ell in ells:
            params = {"p": p, "n": n, "ell": ell, "classgroup": clmod}
            if check_id == "CLCONT":
                params["subfield"] = sub
            out.append(params)
        return out
    raise ValueError(f"unknown check {check_id!r}; known: {', '.join(CHECK_IDS)}")


def cmd_verify(cfg):
    ctx = cfg.context()
    reports = []
    for check_id in cfg.suite:
        for params in _check_params(cfg, check_id):
            reports.append(run_check(check_id, params, ctx))
    lines = []
    for r in reports:
        note = ""
        if r.status == "error":
            note = " -- " + str(r.witnesses.get("message", ""))
        lines.append(f"{r.check}: {r.status.upper()}{note}")
    n_pass = sum(1 for r in reports if r.status == "pass")
    lines.append(f"{n_pass}/{len(reports)} checks passed")
    if any(r.status == "error" for r in reports):
        code = 2
    elif any(r.status == "fail" for r in reports):
        code = 1
    else:
        code = 0
    doc = {"exact": {"checks": [r.to_jsonable() for r in reports]},
           "numeric": {"context": ctx.as_dict()}}
    return doc, lines, code


# ---------------------------------------------------------------------------
# ingest / export

def cmd_ingest(cfg):
    if cfg.input_path is None:
        raise ValueError("ingest needs --in <file.json>")
    with open(cfg.input_path) as fh:
        kind = json.load(fh).get("kind")
    ctx = cfg.context()
    if kind == "sunits":
        lattice = load_units(cfg.input_path, ctx)
        expected = lattice.pset.x_rank()
        if len(lattice.free) != expected:
            raise ValueError(f"unit file has rank {len(lattice.free)}, "
                             f"but #S_K - 1 = {expected}")
        exact = {"kind": "sunits",
                 "field": repr(lattice.model),
                 "torsion_order": lattice.torsion_order,
                 "free_rank": len(lattice.free),
                 "expected_rank": expected,
                 "provider": lattice.provider,
                 "assumptions": list(lattice.assumptions)}
    elif kind == "classgroup":
        clmod, provenance = load_classgroup(cfg.input_path)
        exact = {"kind": "classgroup",
                 "order": clmod.order(),
                 "structure": list(clmod.structure()),
                 "provenance": provenance}
    else:
        raise ValueError(f"unknown document kind {kind!r}")
    exact["accepted"] = True
    return {"exact": exact, "numeric": {"context": ctx.as_dict()}}


def cmd_export(cfg):
    if cfg.output_path is None:
        raise ValueError("export needs --out <file.json>")
    ctx = cfg.context()
    if cfg.input_path is not None:
        lattice = load_units(cfg.input_path, ctx)
    else:
        model, pset = resolve_field(cfg)
        lattice = sunit_group(model, pset, ctx)
    export_units(lattice, cfg.output_path)
    return {"exact": {"written": cfg.output_path,
                      "free_rank": len(lattice.free),
                      "torsion_order": lattice.torsion_order},
            "numeric": {"context": ctx.as_dict()}}


# ---------------------------------------------------------------------------
# plumbing

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--conductor", "-f", type=int, default=None,
                        help="conductor of the ambient cyclotomic field")
    common.add_argument("--prime", "-p", type=int, default=None,
                        help="prime p for prime-power conductors")
    common.add_argument("--level", "-n", type=int, default=1,
                        help="level n: conductor p**n (default 1)")
    common.add_argument("--subfield", default="full",
                        help="full | plus | relative | custom:<residues>")
    common.add_argument("--places", default=None,
                        help="comma-separated finite S-primes "
                             "(default: primes dividing the conductor)")
    common.add_argument("--bits", type=int, default=192,
                        help="working precision in bits (default 192)")
    common.add_argument("--tol-exp", type=int, default=-30, dest="tol_exp",
                        help="numeric tolerance 10**TOL_EXP (default -30)")
    common.add_argument("--provider", default="builtin",
                        choices=("builtin", "file"),
                        help="S-unit source (default builtin)")
    common.add_argument("--in", dest="input_path", default=None,
                        help="input document (units or class-group JSON)")
    common.add_argument("--out", dest="output_path", default=None,
                        help="where to write the report / exported document")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized checks (recorded in reports)")

    parser = argparse.ArgumentParser(
        prog="fracgalois",
        description="Exact fractional-ideal computations for abelian fields "
                    "at s = 0, with a verification suite.")
    sub = parser.add_subparsers(dest="command", required=True)
    pc = sub.add_parser("compute", parents=[common],
                        help="compute one object and report it")
    pc.add_argument("object", choices=COMPUTE_OBJECTS)
    pv = sub.add_parser("verify", parents=[common],
                        help="run named checks; exit 0 iff all pass")
    pv.add_argument("--suite", required=True,
                    help="comma-separated check ids: " + ", ".join(CHECK_IDS))
    sub.add_parser("ingest", parents=[common],
                   help="validate and accept a units/class-group document")
    sub.add_parser("export", parents=[common],
                   help="write the S-unit document for a field")
    return parser


def _config_from_args(args):
    suite = ()
    if getattr(args, "suite", None):
        suite = tuple(s.strip().upper() for s in args.suite.split(",") if s.strip())
    places = None
    if args.places is not None:
        places = tuple(int(q) for q in args.places.split(","))
    return RunConfig(command=args.command,
                     object=getattr(args, "object", None),
                     suite=suite,
                     conductor=args.conductor,
                     prime=args.prime,
                     level=args.level,
                     subfield=args.subfield,
                     places=places,
                     bits=args.bits,
                     tol_exp=args.tol_exp,
                     provider=args.provider,
                     input_path=args.input_path,
                     output_path=args.output_path,
                     seed=args.seed)


def _emit(doc, cfg, stream):
    doc = {"meta": {"generated_at":
                    datetime.datetime.now(datetime.timezone.utc).isoformat(),
                    "tool": "fracgalois"},
           "config": cfg.as_dict(),
           **doc}
    text = json.dumps(doc, indent=2, sort_keys=True)
    if cfg.output_path is not None and cfg.command != "export":
        with open(cfg.output_path, "w") as fh:
            fh.write(text + "\n")
        print(f"report written to {cfg.output_path}", file=stream)
    else:
        print(text, file=stream)


def main(argv=None):
    args = build_parser().parse_args(argv)
    cfg = _config_from_args(args)
    try:
        if cfg.command == "compute":
            doc = cmd_compute(cfg)
            _emit(doc, cfg, sys.stdout)
            return 0
        if cfg.command == "verify":
            doc, lines, code = cmd_verify(cfg)
            for line in lines:
                print(line)
            if cfg.output_path is not None:
                _emit(doc, cfg, sys.stdout)
            return code
        if cfg.command == "ingest":
            doc = cmd_ingest(cfg)
            _emit(doc, cfg, sys.stdout)
            return 0
        if cfg.command == "export":
            doc = cmd_export(cfg)
            _emit(doc, cfg, sys.stdout)
            return 0
        raise ValueError(f"unknown command {cfg.command!r}")
    except (ValueError, ZeroDivisionError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
