"""
circlerig command line.

    circlerig rot --rep rep.json [--words "a1 b1" ...]
    circlerig euler --rep rep.json [--pants pants.json]
    circlerig orbifold-chi "0;3,3,4"
    circlerig verify-cover (--shipped 334 | --shipped 2222g --genus 2 | --signature S --hom hom.json)
    circlerig fuchsian build --kind surface --genus 2 --out rep.json
    circlerig denjoy blow-up --rep rep.json --lambda 0.3 --depth 8 --out blown.json
    circlerig denjoy check --a rep1.json --b rep2.json --samples 200
    circlerig report validate report.json

Every command writes a JSON report (stdout, or --out).  Exit codes: 0 all
checks passed, 1 a check failed, 2 bad input, 3 precision/isolation failure.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import denjoy, euler, fuchsian, presentations
from .circle_maps import CircleHomeo, canonical_lift, fold_word, homeo_from_json, parse_word, word_str
from .presentations import OrbifoldSignature
from .rotation import (
    CertifiedInterval, CocycleBoundError, NotFiniteOrder, exact_rotation_number_finite_order,
    rotation_number, translation_number,
)

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_PRECISION = 0, 1, 2, 3
SCHEMA_VERSION = "1"


class InputError(Exception):
    pass


# ---------------------------------------------------------------- numbers in reports

def _dec(x: float) -> str:
    return str(Decimal(float(x)))


def exact(q, source: str = "computed") -> dict:
    q = Fraction(q)
    return {"cert": "exact", "value": f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator),
            "source": source}


def interval(iv: CertifiedInterval, source: str = "computed") -> dict:
    if iv.exact:
        return exact(iv.rational, source)
    return {"cert": "interval", "lo": _dec(iv.lo), "hi": _dec(iv.hi), "source": source}


def sampled(x: float, source: str = "computed") -> dict:
    return {"cert": "sampled", "value": _dec(x), "source": source}


def configured(x) -> dict:
    if isinstance(x, (int, Fraction)):
        return exact(x, "configured")
    return {"cert": "sampled", "value": _dec(x), "source": "configured"}


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "command", "passed", "exit_code", "checks"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": {"$ref": "#/$defs/node"},
        "passed": {"type": "boolean"},
        "exit_code": {"enum": [0, 1, 2, 3]},
        "error": {"type": "string"},
        "checks": {"type": "array", "items": {"$ref": "#/$defs/check"}},
        "data": {"$ref": "#/$defs/node"},
        "artifacts": {"type": "object"},
    },
    "additionalProperties": False,
    "$defs": {
        "check": {
            "type": "object",
            "required": ["name", "passed"],
            "properties": {"name": {"type": "string"}, "passed": {"type": "boolean"},
                           "detail": {"type": "string"}, "values": {"$ref": "#/$defs/node"}},
            "additionalProperties": False,
        },
        "num": {
            "type": "object",
            "required": ["cert", "source"],
            "properties": {
                "cert": {"enum": ["exact", "interval", "sampled"]},
                "source": {"enum": ["computed", "configured"]},
                "value": {"type": "string"},
                "lo": {"type": "string"},
                "hi": {"type": "string"},
            },
            "additionalProperties": False,
            "if": {"properties": {"cert": {"const": "interval"}}},
            "then": {"required": ["lo", "hi"]},
            "else": {"required": ["value"]},
        },
        # no bare JSON numbers anywhere outside artifacts
        "node": {
            "anyOf": [
                {"type": ["string", "boolean", "null"]},
                {"type": "object", "required": ["cert"], "$ref": "#/$defs/num"},
                {"type": "array", "items": {"$ref": "#/$defs/node"}},
                {"type": "object", "not": {"required": ["cert"]},
                 "additionalProperties": {"$ref": "#/$defs/node"}},
            ]
        },
    },
}


def validate_report(obj: dict) -> list[str]:
    import jsonschema

    v = jsonschema.Draft202012Validator(REPORT_SCHEMA)
    return [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}"
            for e in sorted(v.iter_errors(obj), key=lambda e: list(map(str, e.absolute_path)))]


# ---------------------------------------------------------------- config and report

@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    out: str | None = None
    iters: int = 10_000
    seed: int = 0
    tol: float | None = None
    jobs: int = 1

    def echo(self) -> dict:
        out = {"name": self.command, "iters": configured(self.iters), "seed": configured(self.seed),
               "jobs": configured(self.jobs)}
        if self.tol is not None:
            out["tol"] = configured(self.tol)
        for k, v in self.inputs.items():
            if v is None:
                continue
            if isinstance(v, bool) or isinstance(v, str):
                out[k] = v
            elif isinstance(v, (int, float)):
                out[k] = configured(v)
            elif isinstance(v, list):
                out[k] = [str(x) for x in v]
        return out


class Report:
    def __init__(self, config: RunConfig):
        self.config = config
        self.checks: list[dict] = []
        self.data: dict = {}
        self.artifacts: dict = {}
        self.error: str | None = None
        self.code: int | None = None

    def check(self, name: str, passed: bool, detail: str | None = None, **values) -> bool:
        entry = {"name": name, "passed": bool(passed)}
        if detail:
            entry["detail"] = detail
        if values:
            entry["values"] = values
        self.checks.append(entry)
        return bool(passed)

    def fail(self, code: int, message: str):
        self.code, self.error = code, message

    @property
    def passed(self) -> bool:
        return self.code is None and all(c["passed"] for c in self.checks)

    @property
    def exit_code(self) -> int:
        if self.code is not None:
            return self.code
        return EXIT_OK if self.passed else EXIT_CHECK

    def to_json(self) -> dict:
        out = {"schema": SCHEMA_VERSION, "command": self.config.echo(), "passed": self.passed,
               "exit_code": self.exit_code, "checks": self.checks}
        if self.error:
            out["error"] = self.error
        if self.data:
            out["data"] = self.data
        if self.artifacts:
            out["artifacts"] = self.artifacts
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


# ---------------------------------------------------------------- input helpers

def read_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None


def load_rep(path: str, tol: float | None = None) -> euler.OrbifoldRep:
    """A representation file, or a report that carries one under artifacts."""
    obj = read_json(path)
    if "artifacts" in obj:
        arts = obj["artifacts"]
        obj = arts.get("rep") or arts.get("blown", {}).get("base")
        if obj is None:
            raise InputError(f"{path}: report carries no representation")
    try:
        rep = euler.rep_from_json(obj)
    except (KeyError, ValueError, TypeError) as e:
        raise InputError(f"{path}: not a representation ({e})") from None
    if tol is not None:
        rep.tol = tol
    return rep


def load_action(path: str, tol: float | None = None):
    """A representation, or the blown-up action described by a blow-up report."""
    obj = read_json(path)
    blown = obj.get("artifacts", {}).get("blown")
    if blown is not None:
        base = euler.rep_from_json(blown["base"])
        return denjoy.blow_up(base, blown["p0"], blown["lambda"], blown["depth"])
    return load_rep(path, tol)


def load_homeos(path: str) -> tuple[dict[str, CircleHomeo], dict[str, int]]:
    """Named circle maps (and cone orders) from a rep file, a single map, or a {name: map} table."""
    obj = read_json(path)
    try:
        if "signature" in obj or "artifacts" in obj:
            rep = load_rep(path)
            sig = rep.signature
            return {g: rep.images[g] for g in rep.generators}, dict(zip(sig.cone_names, sig.periods))
        if "type" in obj:
            return {"f": homeo_from_json(obj)}, {}
        return {k: homeo_from_json(v) for k, v in obj.items()}, {}
    except (KeyError, ValueError, TypeError) as e:
        raise InputError(f"{path}: cannot decode circle maps ({e})") from None


def pmap(fn, items: list, jobs: int) -> list:
    """Order-preserving map, optionally over worker processes."""
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------- commands

def _rot_one(args) -> dict:
    name, f, n, order = args
    out = {"name": name, "rotation": interval(rotation_number(f, n)),
           "translation": interval(translation_number(canonical_lift(f), n))}
    if order:
        try:
            out["finite_order"] = exact(exact_rotation_number_finite_order(f, order))
        except NotFiniteOrder:
            out["finite_order"] = None
    return out


def cmd_rot(cfg: RunConfig, report: Report):
    maps, orders = load_homeos(cfg.inputs["rep"])
    items = [(name, f, cfg.iters, orders.get(name, cfg.inputs.get("max_order") or 0)) for name, f in maps.items()]
    for w in cfg.inputs.get("words") or []:
        word = parse_word(w)
        if any(x not in maps and x.swapcase() not in maps for x in word):
            raise InputError(f"word {w!r} uses unknown generators")
        images = {**maps, **{k.swapcase(): v.inverse() for k, v in maps.items()}}
        items.append((word_str(word), fold_word(images, word), cfg.iters,
                      cfg.inputs.get("max_order") or 0))
    rows = pmap(_rot_one, items, cfg.jobs)
    for row in rows:
        report.check(f"rot {row['name']}", True, **{k: v for k, v in row.items() if k != "name"})
        if "finite_order" in row and row["finite_order"] is None:
            report.checks[-1]["passed"] = False
            report.checks[-1]["detail"] = "no finite order found up to the cone period"


def cmd_euler(cfg: RunConfig, report: Report):
    rep = load_rep(cfg.inputs["rep"], cfg.tol)
    report.data["representation"] = rep.id
    if rep.signature.periods:
        eu = euler.euler_orbifold(rep, cfg.iters)
        chi = presentations.orbifold_euler_characteristic(rep.signature)
        report.check("euler_orbifold", True, eu=interval(eu.value))
        report.check("orbifold_milnor_wood", abs(eu.isolated) <= abs(chi), eu=exact(eu.isolated), bound=exact(-chi))
        return
    g = rep.genus
    rel = euler.euler_relator(rep, cfg.iters)
    pants = None
    if cfg.inputs.get("pants"):
        try:
            pants = euler.PantsDecomposition.from_json(read_json(cfg.inputs["pants"]))
        except (KeyError, ValueError, TypeError) as e:
            raise InputError(f"{cfg.inputs['pants']}: bad pants decomposition ({e})") from None
    pa = euler.euler_pants(rep, pants, cfg.iters, cross_check=False)
    report.check("euler_relator", True, eu=exact(rel.integer))
    report.check("euler_pants", True, eu=exact(pa.integer), sum=interval(pa.value), iters=exact(pa.iters))
    report.check("methods_agree", rel.integer == pa.integer, None if rel.integer == pa.integer else
                 f"relator {rel.integer} vs pants {pa.integer}")
    report.check("milnor_wood", euler.check_milnor_wood(rel, g), eu=exact(rel.integer), bound=exact(2 * g - 2))
    report.data["maximal"] = abs(rel.integer) == 2 * g - 2


def cmd_orbifold_chi(cfg: RunConfig, report: Report):
    try:
        sig = OrbifoldSignature.parse(cfg.inputs["signature"])
    except ValueError as e:
        raise InputError(str(e)) from None
    chi = presentations.orbifold_euler_characteristic(sig)
    report.check("orbifold_chi", True, chi=exact(chi))
    report.data["hyperbolic"] = chi < 0


def _cover_inputs(cfg: RunConfig):
    shipped = cfg.inputs.get("shipped")
    if shipped == "334":
        return presentations.hom_334(), fuchsian.build_orbifold_334()
    if shipped == "2222g":
        g = int(cfg.inputs.get("genus") or 2)
        return presentations.hom_2222g(g), fuchsian.build_orbifold_2222g(g)
    if shipped:
        raise InputError(f"unknown shipped cover {shipped!r}; use 334 or 2222g")
    if not (cfg.inputs.get("signature") and cfg.inputs.get("hom")):
        raise InputError("verify-cover needs --shipped or both --signature and --hom")
    try:
        sig = OrbifoldSignature.parse(cfg.inputs["signature"])
        hom = presentations.FiniteGroupHom.from_json(read_json(cfg.inputs["hom"]),
                                                     presentations.orbifold_presentation(sig))
    except (KeyError, ValueError, TypeError) as e:
        raise InputError(f"bad homomorphism ({e})") from None
    geo = None
    if sig.genus == 0 and sig.periods == (3, 3, 4):
        geo = fuchsian.build_orbifold_334()
    elif sig.genus == 0 and len(sig.periods) == 4 and sig.periods[:3] == (2, 2, 2) and sig.periods[3] % 2 == 0:
        geo = fuchsian.build_orbifold_2222g(sig.periods[3] // 2)
    return hom, geo


def cmd_verify_cover(cfg: RunConfig, report: Report):
    hom, geo = _cover_inputs(cfg)
    sig = OrbifoldSignature.parse(cfg.inputs["signature"]) if cfg.inputs.get("signature") else geo.signature
    report.data["signature"] = str(sig)
    report.data["target"] = hom.target.name
    rel = presentations.verify_hom(hom)
    report.check("relators", rel.passed, rel.detail)
    sur = presentations.verify_surjective(hom)
    report.check("surjective", sur.passed, sur.detail)
    tor = presentations.torsion_orders_certificate(hom, sig)
    report.check("torsion_orders", tor.passed, tor.detail)
    if not (rel.passed and sur.passed and tor.passed):
        return
    k = hom.target.order
    chi = presentations.orbifold_euler_characteristic(sig)
    genus = presentations.kernel_genus(sig, k)
    report.check("kernel_genus", True, genus=exact(genus), index=exact(k), chi=exact(chi))
    rs = presentations.reidemeister_schreier(hom.source, hom)
    report.check("schreier_index", rs.index == k, index=exact(rs.index),
                 generators=exact(len(rs.generators)))
    if geo is None:
        report.data["geometric"] = "no shipped geometric realisation for this signature"
        return
    geo.verify()
    scan = fuchsian.scan_kernel(geo, hom, cfg.inputs.get("samples") or 10_000, 12, cfg.seed)
    report.check("kernel_non_elliptic", scan.passed, schreier_min_abs_trace=sampled(scan.min_abs_trace),
                 random_words=exact(scan.random_words), trivial_words=exact(scan.trivial_words),
                 random_min_abs_trace=sampled(scan.random_min_abs_trace))
    rep = geo.boundary_action()
    eu = euler.euler_orbifold(rep, cfg.iters)
    surface = 2 * genus - 2
    report.check("multiplicativity", abs(k * eu.isolated) == surface, orbifold_eu=exact(eu.isolated),
                 index=exact(k), surface_eu_abs=exact(surface))
    rots = {q: exact(exact_rotation_number_finite_order(rep.images[q], m))
            for q, m in zip(sig.cone_names, sig.periods)}
    report.data["cone_rotation_numbers"] = rots


def cmd_fuchsian_build(cfg: RunConfig, report: Report):
    kind = cfg.inputs["kind"]
    try:
        geo = fuchsian.build(kind, int(cfg.inputs.get("genus") or 2))
    except ValueError as e:
        raise InputError(str(e)) from None
    res = {**geo.relator_residuals(), **geo.elliptic_trace_residuals(), **geo.witnesses}
    tol = cfg.tol if cfg.tol is not None else fuchsian.VERIFY_TOL
    for name, r in res.items():
        report.check(f"residual {name}", r < tol, residual=sampled(r), tol=configured(tol))
    rep = geo.boundary_action()
    report.data["signature"] = str(geo.signature)
    report.artifacts["rep"] = rep.to_json()


def cmd_denjoy_blow_up(cfg: RunConfig, report: Report):
    rep = load_rep(cfg.inputs["rep"], cfg.tol)
    lam = cfg.inputs.get("lambda") or 0.3
    depth = cfg.inputs.get("depth") or 8
    p0 = cfg.inputs.get("p0")
    if p0 is None:
        p0 = random.Random(cfg.seed).random()
    try:
        blown = denjoy.blow_up(rep, p0, lam, depth)
    except denjoy.MarkedPointNotFree as e:
        report.check("free_orbit", False, str(e))
        return
    except ValueError as e:
        raise InputError(str(e)) from None
    report.check("free_orbit", True, tested_word_length=exact(2 * blown.census.radius),
                 census_size=exact(len(blown.census)))
    samples = cfg.inputs.get("samples") or 200
    cert = denjoy.check_semi_conjugacy(blown, rep, blown.collapse, samples=samples, seed=cfg.seed)
    _semi_conj_check(report, "semi_conjugacy_to_base", cert)
    start = denjoy.Base(random.Random(cfg.seed + 1).random())
    probe = denjoy.minimality_probe(blown, start, 6)
    report.check("persistent_gap", probe.max_gap >= lam * denjoy.default_sigma(0) - 1e-12, probe.witness,
                 max_gap=sampled(probe.max_gap), expected_at_least=configured(lam))
    comps = denjoy.compare_rotation_numbers(blown, 20, cfg.seed, cfg.iters)
    bad = [c.word for c in comps if not c.agree]
    report.check("rotation_numbers_agree", not bad, f"disagree on {bad}" if bad else None,
                 words=exact(len(comps)))
    if isinstance(rep, euler.SurfaceGroupRep):
        try:
            e0, e1 = denjoy.compare_euler(blown, cfg.iters)
            report.check("euler_agrees", e0.isolated == e1.isolated, base=exact(e0.isolated),
                         blown=exact(e1.isolated))
        except euler.InvalidRepresentation as e:
            report.check("euler_agrees", False, f"mesh realisation too coarse: {e}")
    art = blown.to_json()
    art["base"] = rep.to_json()
    report.artifacts["blown"] = art


def _semi_conj_check(report: Report, name: str, cert):
    detail = None if cert.passed else json.dumps(cert.witness, sort_keys=True)
    report.check(name, cert.passed, detail, samples=exact(cert.samples), triples=exact(cert.triples_checked),
                 orientation_mismatches=exact(cert.orientation_mismatches),
                 equivariance_checked=exact(cert.equivariance_checked),
                 equivariance_failures=exact(cert.equivariance_failures))


def cmd_denjoy_check(cfg: RunConfig, report: Report):
    a = load_action(cfg.inputs["a"], cfg.tol)
    b = load_action(cfg.inputs["b"], cfg.tol)
    if isinstance(b, denjoy.BlownUpAction):
        raise InputError("the target action (--b) must be a representation")
    corr = a.collapse if isinstance(a, denjoy.BlownUpAction) else None
    a_gens = a.gens if isinstance(a, denjoy.BlownUpAction) else a.generators
    if list(a_gens) != list(b.generators):
        raise InputError("actions have different generators")
    cert = denjoy.check_semi_conjugacy(a, b, corr, samples=cfg.inputs.get("samples") or 200, seed=cfg.seed)
    _semi_conj_check(report, "semi_conjugacy", cert)


def cmd_report_validate(cfg: RunConfig, report: Report):
    errs = validate_report(read_json(cfg.inputs["file"]))
    report.check("schema", not errs, "; ".join(errs[:5]) if errs else None)


COMMANDS = {
    "rot": cmd_rot, "euler": cmd_euler, "orbifold-chi": cmd_orbifold_chi, "verify-cover": cmd_verify_cover,
    "fuchsian build": cmd_fuchsian_build, "denjoy blow-up": cmd_denjoy_blow_up, "denjoy check": cmd_denjoy_check,
    "report validate": cmd_report_validate,
}


# ---------------------------------------------------------------- argument parsing

def _common(p: argparse.ArgumentParser):
    p.add_argument("--iters", type=int, default=None, help="iteration budget n (default 10000)")
    p.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    p.add_argument("--tol", type=float, default=None, help="tolerance override")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default 1)")
    p.add_argument("--config", default=None, help="TOML file with defaults for any flag")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="circlerig", description="Circle actions of surface and orbifold groups.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("rot", help="rotation and translation numbers")
    p.add_argument("--rep", required=True)
    p.add_argument("--words", nargs="*", default=None)
    p.add_argument("--max-order", type=int, default=None, dest="max_order")
    _common(p)

    p = sub.add_parser("euler", help="Euler number by both methods")
    p.add_argument("--rep", required=True)
    p.add_argument("--pants", default=None)
    _common(p)

    p = sub.add_parser("orbifold-chi", help="orbifold Euler characteristic")
    p.add_argument("signature")
    _common(p)

    p = sub.add_parser("verify-cover", help="certify an orbifold cover")
    p.add_argument("--shipped", choices=["334", "2222g"], default=None)
    p.add_argument("--genus", type=int, default=None)
    p.add_argument("--signature", default=None)
    p.add_argument("--hom", default=None)
    p.add_argument("--samples", type=int, default=None)
    _common(p)

    p = sub.add_parser("fuchsian", help="geometric representations")
    fs = p.add_subparsers(dest="sub", required=True)
    q = fs.add_parser("build")
    q.add_argument("--kind", choices=["surface", "2222g", "334"], required=True)
    q.add_argument("--genus", type=int, default=None)
    _common(q)

    p = sub.add_parser("denjoy", help="Denjoy blow-up and semi-conjugacy")
    ds = p.add_subparsers(dest="sub", required=True)
    q = ds.add_parser("blow-up")
    q.add_argument("--rep", required=True)
    q.add_argument("--lambda", type=float, default=None, dest="lambda")
    q.add_argument("--depth", type=int, default=None)
    q.add_argument("--p0", type=float, default=None)
    q.add_argument("--samples", type=int, default=None)
    _common(q)
    q = ds.add_parser("check")
    q.add_argument("--a", required=True)
    q.add_argument("--b", required=True)
    q.add_argument("--samples", type=int, default=None)
    _common(q)

    p = sub.add_parser("report", help="report utilities")
    rs = p.add_subparsers(dest="sub", required=True)
    q = rs.add_parser("validate")
    q.add_argument("file")
    _common(q)
    return parser


GLOBAL_KEYS = ("iters", "seed", "tol", "out", "jobs")
DEFAULTS = {"iters": 10_000, "seed": 0, "tol": None, "out": None, "jobs": 1}


def make_config(args: argparse.Namespace) -> RunConfig:
    cmd = args.cmd + (f" {args.sub}" if getattr(args, "sub", None) else "")
    file_cfg: dict = {}
    if args.config:
        try:
            file_cfg = tomllib.loads(Path(args.config).read_text())
        except OSError as e:
            raise InputError(f"{args.config}: {e.strerror}") from None
        except tomllib.TOMLDecodeError as e:
            raise InputError(f"{args.config}: {e}") from None
    values = vars(args)
    merged = {}
    for k, v in values.items():
        if k in ("cmd", "sub", "config"):
            continue
        merged[k] = v if v is not None else file_cfg.get(k.replace("_", "-"), file_cfg.get(k))
    glob = {k: merged.pop(k) if merged.get(k) is not None else DEFAULTS[k] for k in GLOBAL_KEYS}
    if glob["iters"] < 1 or glob["jobs"] < 1:
        raise InputError("--iters and --jobs must be positive")
    return RunConfig(cmd, merged, **glob)


def run(cfg: RunConfig) -> Report:
    report = Report(cfg)
    try:
        COMMANDS[cfg.command](cfg, report)
    except InputError as e:
        report.fail(EXIT_INPUT, str(e))
    except (euler.InvalidRepresentation, presentations.CoverError) as e:
        report.fail(EXIT_INPUT if isinstance(e, euler.InvalidRepresentation) else EXIT_CHECK, str(e))
    except euler.CrossValidationError as e:
        report.fail(EXIT_CHECK, str(e))
    except (euler.PrecisionError, CocycleBoundError) as e:
        report.fail(EXIT_PRECISION, str(e))
    except fuchsian.ConstructionError as e:
        report.fail(EXIT_PRECISION, str(e))
    return report


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    report = run(cfg)
    text = report.dumps()
    if cfg.out:
        Path(cfg.out).write_text(text)
        status = "PASS" if report.passed else "FAIL"
        print(f"{status} {cfg.command}: {sum(c['passed'] for c in report.checks)}/{len(report.checks)} checks"
              f" -> {cfg.out}")
    else:
        sys.stdout.write(text)
    if report.error:
        print(f"error: {report.error}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
