"""Command-line front end: ``homspace space|tor|bar|cochain``.

Exit codes: 0 success, 2 invalid input, 3 refused multiplicative request,
4 failed verification.  Every report embeds a run manifest; replaying the
manifest with ``--replay`` reproduces the report byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Sequence

import jsonschema

from .barcalc import Dga, DgModule, NotFinite, bar, check_counit
from .catalog import (CatalogError, lookup, subgroup_from_spec, trivial,
                      weyl_euler_characteristic)
from .cdga import Cdga
from .coeffring import parse_ring
from .gca import AlgebraMap, FreeCga, Generator
from .models import build_model, one_sided, two_sided
from .presentation import (MultiplicativeRefusal, duality_and_euler_checks, finite_cohomology,
                           format_poincare, ring_presentation)
from .simplicial import (FiniteSimplicialSet, NormalizedCochain, Surjection, boundary_simplex,
                         coboundary, cup_i, hga_operation, interval_cut_cochain, is_coboundary,
                         random_simplicial_set, rp2_model, sphere_model, standard_simplex,
                         steenrod_relation_check)
from .tor import (TorTable, compare_totals, koszul_tor, model_tor, recipe_bar_tor,
                  regular_sequence_check, bar_tor)

__all__ = ["main", "RunManifest", "ENGINE_VERSION"]

ENGINE_VERSION = "0.1.0"
SCHEMA_VERSION = 1
EXIT_OK, EXIT_INVALID, EXIT_REFUSED, EXIT_VERIFY = 0, 2, 3, 4

CHAR2_WARNING = ("additive only in characteristic 2: the Tor algebra need not be the "
                 "cohomology ring (U(2)/diag U(1) = SO(3) has Tor L[z1] (x) F2[y2]/(y2^2) "
                 "but cohomology F2[x1]/(x1^4))")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunManifest:
    command: str
    config: Dict[str, object]
    coeff: str
    maxdeg: Optional[int]
    engine_version: str = ENGINE_VERSION
    wall_time: Optional[float] = None
    warnings: List[str] = field(default_factory=list)

    def to_json(self, with_time: bool = True) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "config": self.config,
            "coeff": self.coeff,
            "maxdeg": self.maxdeg,
            "engine_version": self.engine_version,
            "warnings": list(self.warnings),
        }
        if with_time and self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 3)
        return out


def _schema(name: str) -> dict:
    text = resources.files("homspace").joinpath("schema", f"{name}.schema.json").read_text()
    return json.loads(text)


def _load_json(path: str, schema: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_INVALID, f"cannot read {path}: {exc}")
    try:
        jsonschema.validate(obj, _schema(schema))
    except jsonschema.ValidationError as exc:
        raise CliError(EXIT_INVALID, f"{path} violates the {schema} schema: {exc.message}")
    return obj


def _weights(text: Optional[str]):
    if text is None:
        return None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        try:
            with open(text) as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(EXIT_INVALID, f"weight matrix is neither JSON nor a file: {exc}")
    if not (isinstance(obj, list) and all(isinstance(r, list) and
                                          all(isinstance(x, int) for x in r) for r in obj)):
        raise CliError(EXIT_INVALID, "weight matrix must be a list of integer rows")
    return obj


def _ring(text: str):
    try:
        return parse_ring(text)
    except ValueError as exc:
        raise CliError(EXIT_INVALID, str(exc))


# ---------------------------------------------------------------------------
# space
# ---------------------------------------------------------------------------


def cmd_space(cfg: dict, manifest: RunManifest) -> dict:
    ring = _ring(cfg["coeff"])
    try:
        G = lookup(cfg["G"], ring)
        eH = subgroup_from_spec(cfg["H"], G, _weights(cfg["embed_H"]), ring)
        eK = subgroup_from_spec(cfg["K"], G, _weights(cfg["embed_K"]), ring)
        if eH.source.rank == 0:
            recipe = one_sided(G, eK, ring)
        else:
            recipe = two_sided(G, eH, eK, ring)
        model = build_model(recipe)
    except (CatalogError, ValueError) as exc:
        raise CliError(EXIT_INVALID, f"invalid space specification: {exc}")
    dim = recipe.manifold_dimension
    cap = cfg["maxdeg"] if cfg["maxdeg"] is not None else dim
    if cap < 0:
        raise CliError(EXIT_INVALID, "--maxdeg must be nonnegative")
    manifest.maxdeg = cap
    warnings = manifest.warnings
    title = (f"{recipe.H.name or '1'}\\{G.name}/{recipe.K.name or '1'}" if recipe.H.rank
             else f"{G.name}/{recipe.K.name or '1'}")
    result: dict = {"space": title, "kind": recipe.kind, "ring": ring.name, "maxdeg": cap,
                    "dimension": dim, "recipe": recipe.to_json(), "model": model.to_json()}
    checks: dict = {}
    checks["d_squared"] = model.check_d_squared(cap + 1)
    if not checks["d_squared"]:
        raise CliError(EXIT_VERIFY, "model differential does not square to zero")

    if not ring.is_field:
        if cfg["method"] != "koszul":
            raise CliError(EXIT_INVALID, "the bar path needs field coefficients")
        groups = model.cohomology_over_Z(cap)
        result["groups"] = [{"degree": g.degree, "free_rank": g.free_rank,
                             "torsion": list(g.torsion), "text": str(g)} for g in groups]
        warnings.append(f"additive only over {ring.name}: groups are computed, products are not")
        if not ring.two_is_unit:
            warnings.append("2 is not invertible: the model is only known to compute the "
                            "cohomology of the space when 2 is a unit (use Z-inv2)")
        if cfg["ring"]:
            raise CliError(EXIT_REFUSED, f"no ring presentation over {ring.name}; "
                                         "use a field")
        return {"result": result, "checks": checks}

    threads = cfg["threads"]
    slices = model.cohomology(cap, threads)
    betti = [s.dimension for s in slices]
    result["poincare"] = betti
    result["poincare_text"] = format_poincare(betti)
    tables: Dict[str, TorTable] = {}
    if cfg["method"] in ("koszul", "both"):
        tables["koszul"] = model_tor(model, cap, threads)
    if cfg["method"] in ("bar", "both"):
        tables["bar"] = recipe_bar_tor(recipe, cap, threads)
    result["tor"] = {k: t.to_json() for k, t in tables.items()}
    for k, t in tables.items():
        if t.totals() != betti:
            raise CliError(EXIT_VERIFY, f"{k} Tor totals {t.totals()} differ from "
                                        f"H(model) {betti}")
    if len(tables) == 2:
        diff = compare_totals(tables["koszul"], tables["bar"])
        checks["methods_agree"] = not diff
        if diff:
            raise CliError(EXIT_VERIFY, f"Koszul and bar totals differ in degrees {diff}")

    finite = cap >= dim and not any(betti[dim + 1:]) and finite_cohomology(model, dim)
    if finite:
        try:
            chi = weyl_euler_characteristic(G, recipe.H, recipe.K)
        except CatalogError:
            chi = None
        checks["duality"] = duality_and_euler_checks(betti, dim, chi).to_json()
    else:
        checks["duality"] = None
        if cap >= dim:
            warnings.append("cohomology is not that of a closed manifold of dimension "
                            f"{dim} (the action is not free); duality checks skipped")

    if ring.characteristic == 2:
        warnings.append(CHAR2_WARNING)
        if cfg["ring"]:
            raise CliError(EXIT_REFUSED, "refusing to print a cohomology ring: " + CHAR2_WARNING)
        result["presentation"] = None
    else:
        try:
            pres = ring_presentation(model, cap, dim, slices, prefix=cfg["gen_prefix"])
        except MultiplicativeRefusal as exc:
            raise CliError(EXIT_REFUSED, str(exc))
        result["presentation"] = pres.to_json()
        result["presentation_text"] = pres.render()
        if not pres.complete:
            warnings.append(f"presentation valid through degree {cap} only "
                            f"(manifold dimension {dim})")
    return {"result": result, "checks": checks}


def _render_space(rep: dict) -> List[str]:
    r, c = rep["result"], rep["checks"]
    out = [f"{r['space']} over {r['ring']} ({r['kind']} model), degrees <= {r['maxdeg']}, "
           f"dimension {r['dimension']}"]
    if "groups" in r:
        out.append("cohomology groups:")
        out += [f"  H^{g['degree']} = {g['text']}" for g in r["groups"]]
    else:
        out.append("Poincare polynomial: " + r["poincare_text"])
        for k, t in r["tor"].items():
            out.append(TorTable({(e["p"], e["q"]): e["dim"] for e in t["entries"]},
                                {e["n"]: e["dim"] for e in t["total_dims"]}, t["cap"],
                                t["method"], t["ring"], t["bigraded"]).render())
        if r.get("presentation_text"):
            out.append("presentation: " + r["presentation_text"])
    out.append("checks:")
    for k, v in c.items():
        out.append(f"  {k}: {json.dumps(v, sort_keys=True)}")
    return out


# ---------------------------------------------------------------------------
# tor
# ---------------------------------------------------------------------------


def _free_from(ring, gens: Sequence[dict]) -> FreeCga:
    return FreeCga(ring, [Generator(g["name"], g["degree"], g.get("sort", ""))
                          for g in gens])


def _span_map(base: FreeCga, obj: Optional[dict], ring) -> Optional[AlgebraMap]:
    if obj is None:
        return None
    target = _free_from(ring, obj["generators"])
    images = {}
    for g in base.generators:
        text = obj["images"].get(g.name, "0")
        images[g.name] = target.parse(text)
    return AlgebraMap(base, target, images)


def cmd_tor(cfg: dict, manifest: RunManifest) -> dict:
    span = _load_json(cfg["span"], "span")
    ring = _ring(cfg["coeff"] or span.get("coeff", "Q"))
    if not ring.is_field:
        raise CliError(EXIT_INVALID, "tor needs field coefficients")
    manifest.coeff = ring.name
    cap = cfg["maxdeg"] if cfg["maxdeg"] is not None else span.get("maxdeg", 12)
    manifest.maxdeg = cap
    try:
        base = _free_from(ring, span["base"])
        left = _span_map(base, span.get("left"), ring)
        right = _span_map(base, span["right"], ring)
    except (ValueError, KeyError) as exc:
        raise CliError(EXIT_INVALID, f"invalid span: {exc}")
    tables: Dict[str, TorTable] = {}
    checks: dict = {}
    try:
        if cfg["method"] in ("koszul", "both"):
            tables["koszul"] = koszul_tor(base, left, right, cap, cfg["threads"])
            checks["d_squared"] = tables["koszul"].model.check_d_squared(cap + 1)
        if cfg["method"] in ("bar", "both"):
            A = Dga.from_cdga(base, cap + 3, complete=not base.generators)
            N = DgModule.from_algebra_map(A, right, "left", cap + 2)
            M = DgModule.from_algebra_map(A, left, "right", cap + 2) if left else None
            tables["bar"] = bar_tor(A, M, N, cap, threads=cfg["threads"])
    except (ValueError, NotFinite) as exc:
        raise CliError(EXIT_INVALID, f"cannot compute Tor: {exc}")
    result = {"ring": ring.name, "maxdeg": cap,
              "tor": {k: t.to_json() for k, t in tables.items()}}
    if left is None:
        verdict = regular_sequence_check(right.target, right.images, cap,
                                         [g.degree for g in base.generators])
        result["regular_sequence"] = verdict.to_json()
    if len(tables) == 2:
        diff = compare_totals(tables["koszul"], tables["bar"])
        checks["methods_agree"] = not diff
        if diff:
            raise CliError(EXIT_VERIFY, f"Koszul and bar totals differ in degrees {diff}")
    return {"result": result, "checks": checks}


def _render_tor(rep: dict) -> List[str]:
    r = rep["result"]
    out = []
    for t in r["tor"].values():
        out.append(TorTable({(e["p"], e["q"]): e["dim"] for e in t["entries"]},
                            {e["n"]: e["dim"] for e in t["total_dims"]}, t["cap"],
                            t["method"], t["ring"], t["bigraded"]).render())
    if "regular_sequence" in r:
        out.append(f"regular sequence: {r['regular_sequence']['regular']}")
    for k, v in rep["checks"].items():
        out.append(f"{k}: {v}")
    return out


# ---------------------------------------------------------------------------
# bar
# ---------------------------------------------------------------------------


def _dga_from(obj: dict, ring_text: Optional[str], cap: int) -> Dga:
    if "basis" in obj:
        if ring_text:
            obj = dict(obj, ring=ring_text)
        return Dga.from_json(obj)
    ring = _ring(ring_text or obj.get("coeff", "Q"))
    alg = _free_from(ring, obj["generators"])
    diffs = {k: alg.parse(v) for k, v in obj.get("differentials", {}).items()}
    source = Cdga(alg, diffs) if diffs else alg
    if "truncate" in obj:
        return Dga.from_cdga(source, obj["truncate"], complete=True, name=obj.get("name", ""))
    return Dga.from_cdga(source, cap, name=obj.get("name", ""))


def cmd_bar(cfg: dict, manifest: RunManifest) -> dict:
    obj = _load_json(cfg["dga"], "dga")
    cap = cfg["maxdeg"]
    manifest.maxdeg = cap
    try:
        A = _dga_from(obj, cfg["coeff"], cap + 3)
    except ValueError as exc:
        raise CliError(EXIT_INVALID, f"invalid DGA: {exc}")
    manifest.coeff = A.ring.name
    if not A.ring.is_field:
        raise CliError(EXIT_INVALID, "bar needs field coefficients")
    checks: dict = {}
    chk = A.check()
    checks["dga"] = {"ok": chk.ok, "message": chk.message}
    if not chk.ok:
        raise CliError(EXIT_VERIFY, f"input is not a DGA: {chk.message}")
    try:
        B = bar(A, cap, cfg["word_cap"])
    except (NotFinite, ValueError) as exc:
        raise CliError(EXIT_INVALID, str(exc))
    Bc = B.as_complex()
    d2 = Bc.check_d_squared(cap)
    checks["bar_d_squared"] = bool(d2)
    if not d2:
        raise CliError(EXIT_VERIFY, f"bar differential: {d2.message}")
    dims = Bc.cohomology_dims(0, cap, cfg["threads"])
    result = {"ring": A.ring.name, "maxdeg": cap, "H_bar": dims,
              "bar_basis": [len(B.basis.get(n, [])) for n in range(cap + 1)]}
    if cfg["check_counit"]:
        ccap = min(cap, cfg["counit_maxdeg"])
        try:
            r = check_counit(A, ccap)
        except (NotFinite, ValueError) as exc:
            raise CliError(EXIT_INVALID, f"counit check: {exc}")
        checks["counit"] = {"ok": r.ok, "message": r.message, "maxdeg": ccap}
        if not r.ok:
            raise CliError(EXIT_VERIFY, f"counit is not a quasi-isomorphism: {r.message}")
    return {"result": result, "checks": checks}


def _render_bar(rep: dict) -> List[str]:
    r = rep["result"]
    out = [f"H(B A) over {r['ring']} through degree {r['maxdeg']}:",
           "  " + " ".join(f"{n}:{d}" for n, d in enumerate(r["H_bar"]))]
    for k, v in rep["checks"].items():
        out.append(f"{k}: {json.dumps(v, sort_keys=True)}")
    return out


# ---------------------------------------------------------------------------
# cochain
# ---------------------------------------------------------------------------


_BUILTIN_COCHAINS = {"rp2": {"x": {"degree": 1, "values": {"a": 1}}}}


def _space(text: str):
    if text.endswith(".json"):
        obj = _load_json(text, "sset")
        try:
            X = FiniteSimplicialSet.from_json(obj)
        except ValueError as exc:
            raise CliError(EXIT_INVALID, f"invalid simplicial set: {exc}")
        return X, obj.get("cochains", {})
    name, _, arg = text.partition(":")
    try:
        if name == "rp2":
            return rp2_model(), _BUILTIN_COCHAINS["rp2"]
        if name == "simplex":
            return standard_simplex(int(arg)), {}
        if name == "boundary":
            return boundary_simplex(int(arg)), {}
        if name == "sphere":
            return sphere_model(int(arg)), {}
        if name == "random":
            return random_simplicial_set(int(arg or 0)), {}
    except ValueError as exc:
        raise CliError(EXIT_INVALID, str(exc))
    raise CliError(EXIT_INVALID, f"unknown simplicial set {text!r}")


def _cochain(X, named: dict, text: str, ring) -> NormalizedCochain:
    obj = named.get(text)
    if obj is None:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            raise CliError(EXIT_INVALID, f"unknown cochain {text!r}")
    try:
        return NormalizedCochain.from_json(X, obj, ring)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(EXIT_INVALID, f"invalid cochain {text!r}: {exc}")


def cmd_cochain(cfg: dict, manifest: RunManifest) -> dict:
    ring = _ring(cfg["coeff"])
    X, named = _space(cfg["sset"])
    op, _, arg = cfg["op"].partition(":")
    checks: dict = {}
    result: dict = {"space": X.name, "ring": ring.name, "op": cfg["op"]}
    if op == "relation":
        try:
            i = int(arg)
        except ValueError:
            raise CliError(EXIT_INVALID, f"bad relation index {arg!r}")
        rep = steenrod_relation_check(i, X, cfg["trials"], ring, cfg["seed"])
        checks["steenrod_relation"] = {"i": i, "ok": rep.ok, "trials": rep.trials,
                                       "message": rep.message}
        if not rep.ok:
            a, b = rep.witness
            checks["steenrod_relation"]["witness"] = [a.to_json(), b.to_json()]
            raise CliError(EXIT_VERIFY, f"Steenrod relation fails: {rep.message}; witness "
                                        f"{json.dumps([a.to_json(), b.to_json()])}")
        return {"result": result, "checks": checks}

    inputs = [_cochain(X, named, t, ring) for t in [cfg["a"], cfg["b"]] + cfg["extra"] if t]
    try:
        if op == "cup":
            out = cup_i(int(arg or 0), *inputs)
        elif op == "E":
            out = hga_operation("E", inputs, l=int(arg))
        elif op == "F":
            p, q = (int(x) for x in arg.split(","))
            out = hga_operation("F", inputs, p=p, q=q)
        elif op == "surj":
            out = interval_cut_cochain(Surjection.parse(arg), inputs)
        else:
            raise CliError(EXIT_INVALID, f"unknown operation {cfg['op']!r}")
    except (ValueError, TypeError) as exc:
        raise CliError(EXIT_INVALID, f"{cfg['op']}: {exc}")
    result["value"] = out.to_json()
    if ring.is_field:
        checks["cocycle"] = coboundary(out).is_zero() if out.degree < X.top_dimension else True
        checks["coboundary"] = is_coboundary(out)
        same = {}
        for name, c in zip(["a", "b"] + [f"c{k}" for k in range(len(cfg["extra"]))], inputs):
            if c.degree == out.degree:
                same[name] = is_coboundary(out - c)
        checks["equals_input_up_to_coboundary"] = same
    return {"result": result, "checks": checks}


def _render_cochain(rep: dict) -> List[str]:
    r = rep["result"]
    out = [f"{r['op']} on {r['space']} over {r['ring']}"]
    if "value" in r:
        v = r["value"]
        vals = ", ".join(f"{k}: {x}" for k, x in v["values"].items()) or "0"
        out.append(f"value (degree {v['degree']}): {vals}")
    for k, v in rep["checks"].items():
        out.append(f"{k}: {json.dumps(v, sort_keys=True)}")
    return out


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------


COMMANDS = {"space": (cmd_space, _render_space), "tor": (cmd_tor, _render_tor),
            "bar": (cmd_bar, _render_bar), "cochain": (cmd_cochain, _render_cochain)}
_NOT_CONFIG = {"command", "replay", "manifest_out"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homspace",
                                description="Cohomology of homogeneous spaces and biquotients")
    p.add_argument("--replay", metavar="MANIFEST", help="rerun the command recorded in a manifest")
    sub = p.add_subparsers(dest="command")

    def common(sp, coeff_default: Optional[str] = "Q"):
        sp.add_argument("--coeff", default=coeff_default,
                        help="Q, F<p>, Z, Z-inv<m> or Z[1/m]")
        sp.add_argument("--format", choices=["text", "json"], default="text")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--manifest-out", metavar="PATH",
                        help="also write the manifest (with wall time) here")

    s = sub.add_parser("space", help="cohomology of G/K or H\\G/K")
    s.add_argument("--G", required=True)
    s.add_argument("--H", default="1")
    s.add_argument("--K", default="1")
    s.add_argument("--embed-H", dest="embed_H", help="torus weight matrix (JSON or file)")
    s.add_argument("--embed-K", dest="embed_K", help="torus weight matrix (JSON or file)")
    s.add_argument("--maxdeg", type=int)
    s.add_argument("--method", choices=["koszul", "bar", "both"], default="koszul")
    s.add_argument("--ring", action="store_true",
                   help="require a ring presentation; refuse (exit 3) when not available")
    s.add_argument("--gen-prefix", dest="gen_prefix", default="x")
    common(s)

    t = sub.add_parser("tor", help="Tor over a polynomial algebra of a span")
    t.add_argument("--span", required=True)
    t.add_argument("--maxdeg", type=int)
    t.add_argument("--method", choices=["koszul", "bar", "both"], default="both")
    common(t, None)

    b = sub.add_parser("bar", help="bar construction of a DGA")
    b.add_argument("--dga", required=True)
    b.add_argument("--maxdeg", type=int, default=12)
    b.add_argument("--word-cap", dest="word_cap", type=int)
    b.add_argument("--check-counit", dest="check_counit", action="store_true")
    b.add_argument("--counit-maxdeg", dest="counit_maxdeg", type=int, default=8)
    common(b, None)

    c = sub.add_parser("cochain", help="interval-cut operations on a simplicial set")
    c.add_argument("--sset", required=True,
                   help="JSON file, or rp2, simplex:n, boundary:n, sphere:n, random:seed")
    c.add_argument("--op", required=True, help="cup:i, E:l, F:p,q, surj:1,2,1 or relation:i")
    c.add_argument("--a")
    c.add_argument("--b")
    c.add_argument("--extra", nargs="*", default=[])
    c.add_argument("--trials", type=int, default=200)
    c.add_argument("--seed", type=int, default=0)
    common(c)
    return p


def run(command: str, cfg: dict, fmt: str) -> tuple:
    """Execute one command; returns (exit code, stdout text, manifest)."""
    manifest = RunManifest(command, cfg, cfg.get("coeff") or "", cfg.get("maxdeg"))
    fn, render = COMMANDS[command]
    start = time.perf_counter()
    code, error = EXIT_OK, None
    try:
        rep = fn(cfg, manifest)
    except CliError as exc:
        code, error, rep = exc.code, str(exc), None
    manifest.wall_time = time.perf_counter() - start
    if rep is None:
        return code, error, manifest
    report = {"command": command, "result": rep["result"], "checks": rep["checks"],
              "warnings": list(manifest.warnings), "manifest": manifest.to_json(False)}
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True)
    else:
        lines = render(report)
        lines += [f"warning: {w}" for w in manifest.warnings]
        lines.append("manifest: " + json.dumps(manifest.to_json(False), sort_keys=True))
        text = "\n".join(lines)
    return code, text, manifest


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.replay:
        try:
            with open(args.replay) as fh:
                obj = json.load(fh)
            if "manifest" in obj and "command" in obj and "result" in obj:
                obj = obj["manifest"]
            jsonschema.validate(obj, _schema("manifest"))
        except (OSError, json.JSONDecodeError, jsonschema.ValidationError) as exc:
            print(f"error: cannot replay {args.replay}: {exc}", file=sys.stderr)
            return EXIT_INVALID
        command, cfg = obj["command"], dict(obj["config"])
        manifest_out = None
    elif args.command:
        command = args.command
        cfg = {k: v for k, v in vars(args).items() if k not in _NOT_CONFIG}
        manifest_out = args.manifest_out
    else:
        parser.print_help(sys.stderr)
        return EXIT_INVALID
    code, text, manifest = run(command, cfg, cfg.get("format", "text"))
    if code == EXIT_OK:
        print(text)
    else:
        for w in manifest.warnings:
            print(f"warning: {w}", file=sys.stderr)
        print(f"error: {text}", file=sys.stderr)
    if manifest_out:
        with open(manifest_out, "w") as fh:
            json.dump(manifest.to_json(True), fh, indent=2, sort_keys=True)
    return code


if __name__ == "__main__":
    sys.exit(main())
