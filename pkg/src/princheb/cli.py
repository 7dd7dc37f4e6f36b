"""Command line surface: field reports, prime scans, exact density reports.

Configs are JSON, passed inline or as a path to a file.  Field configs use
the schemas of field_from_config, with two shorthands: a bare list is read
as quadratic ([-5]) or multiquadratic ([-3,13]) depending on its length,
and a dict without "type" is classified by its keys.  Extension configs
are documented in the README: invariant factors of the kernel, the
quotient group, one action matrix per group element, and a flat cocycle
table.

Exit codes: 0 success, 2 rejected input or uncertified data, 3 honest
refusal mid-computation or a failed internal cross-check.  All rational
quantities are printed as num/den with a decimal approximation next to
them; JSON reports carry both fields.

Set PRINCHEB_CACHE to a directory to memoize class group computations
across invocations, keyed by a hash of the field config.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
import tempfile
from fractions import Fraction
from typing import Optional

from .abelian import AbelianGroup, IntMatrix
from .density import (
    class_group_from_densities,
    density_table_for_recovery,
    positivity,
    principal_density,
)
from .errors import (
    DataError,
    ExcludedPrime,
    FormulaInapplicable,
    InputError,
    InternalCheckError,
    PreconditionError,
    Undecided,
)
from .extension import (
    Extension,
    FiniteGroup,
    GAction,
    TwoCocycle,
    abelian_table_group,
    conjugacy_classes,
    cyclic_group,
    dihedral_group,
    quaternion_group,
    symmetric_group,
)
from .numberfield import (
    ClassGroupData,
    FieldDescription,
    bach_sorenson_bound,
    class_group,
    field_from_config,
    lenstra_class_bound,
    minkowski_bound,
    scan_primes,
)
from .numberfield.ideals import PrimeIdeal
from .verifier import gold_certificate, hes_nonsplit_test


# ---------------------------------------------------------------------------
# config ingestion


def _load_config(arg: str):
    text = arg.strip()
    if text.startswith("{") or text.startswith("["):
        try:
            obj = json.loads(text)
        except ValueError as exc:
            raise InputError(f"inline config is not valid JSON: {exc}")
    else:
        try:
            with open(arg) as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise InputError(f"cannot read config {arg!r}: {exc}")
        except ValueError as exc:
            raise InputError(f"config file {arg!r} is not valid JSON: {exc}")
    if not isinstance(obj, (dict, list)):
        raise InputError("config must be a JSON object or list")
    return obj


def _field_config(obj) -> dict:
    """Normalize the accepted field shorthands to a full config dict."""
    if isinstance(obj, list):
        ds = [int(x) for x in obj]
        if not ds:
            raise InputError("field list shorthand must not be empty")
        if len(ds) == 1:
            return {"type": "quadratic", "d": ds[0]}
        return {"type": "multiquadratic", "ds": ds}
    if isinstance(obj, dict) and "type" not in obj:
        if "d" in obj:
            return {"type": "quadratic", **obj}
        if "ds" in obj:
            return {"type": "multiquadratic", **obj}
        if "min_poly" in obj:
            return {"type": "generic", **obj}
        raise InputError(
            "field config needs a 'type' key (or one of 'd', 'ds', 'min_poly')"
        )
    if not isinstance(obj, dict):
        raise InputError("field config must be a JSON object or list")
    return obj


def _group_from_config(spec) -> FiniteGroup:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise InputError(
            "'group' must be a one-key object, e.g. {\"cyclic\": 4}"
        )
    kind, arg = next(iter(spec.items()))
    if kind == "cyclic":
        return cyclic_group(int(arg))
    if kind == "abelian":
        return abelian_table_group([int(x) for x in arg])
    if kind == "dihedral":
        return dihedral_group(int(arg))
    if kind == "symmetric":
        return symmetric_group(int(arg))
    if kind == "quaternion":
        if arg is not True:
            raise InputError("'quaternion' takes the value true")
        return quaternion_group()
    if kind == "table":
        return FiniteGroup(
            tuple(tuple(int(x) for x in row) for row in arg)
        )
    if kind == "permutations":
        return _group_from_permutations(arg)
    raise InputError(f"unknown group kind {kind!r} in 'group'")


def _group_from_permutations(gens) -> FiniteGroup:
    """Closure of generating permutations of {0..k-1} under composition."""
    if not gens:
        raise InputError("'permutations' needs at least one generator")
    k = len(gens[0])
    perms = []
    for g in gens:
        p = tuple(int(x) for x in g)
        if sorted(p) != list(range(k)):
            raise InputError(f"{list(g)} is not a permutation of 0..{k - 1}")
        perms.append(p)
    ident = tuple(range(k))
    elems = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for e in frontier:
            for g in perms:
                prod = tuple(g[e[i]] for i in range(k))
                if prod not in seen:
                    seen.add(prod)
                    elems.append(prod)
                    nxt.append(prod)
        frontier = nxt
        if len(elems) > 10000:
            raise InputError("permutation group too large (over 10000)")
    index = {e: i for i, e in enumerate(elems)}
    table = tuple(
        tuple(index[tuple(a[b[i]] for i in range(k))] for b in elems)
        for a in elems
    )
    return FiniteGroup(table)


def _extension_from_config(cfg) -> Extension:
    if not isinstance(cfg, dict):
        raise InputError("extension config must be a JSON object")
    unknown = set(cfg) - {"kernel", "group", "action", "cocycle"}
    if unknown:
        raise InputError(f"unknown extension config keys: {sorted(unknown)}")
    for key in ("kernel", "group"):
        if key not in cfg:
            raise InputError(f"extension config needs {key!r}")
    A = AbelianGroup(tuple(int(d) for d in cfg["kernel"]))
    G = _group_from_config(cfg["group"])
    rank = A.rank
    if "action" in cfg:
        raw = cfg["action"]
        if len(raw) != G.order:
            raise InputError(
                f"'action' needs one matrix per group element "
                f"({G.order}), got {len(raw)}"
            )
        mats = [
            IntMatrix([[int(x) for x in row] for row in m], cols=rank)
            for m in raw
        ]
    else:
        mats = [IntMatrix.identity(rank) for _ in range(G.order)]
    action = GAction(G, A, mats)
    if "cocycle" in cfg:
        flat = cfg["cocycle"]
        if len(flat) != G.order**2:
            raise InputError(
                f"'cocycle' needs {G.order**2} coordinate vectors "
                f"(row-major over G x G), got {len(flat)}"
            )
        vecs = [tuple(int(x) for x in v) for v in flat]
        if any(len(v) != rank for v in vecs):
            raise InputError(f"cocycle vectors must have length {rank}")
        table = [
            vecs[i * G.order : (i + 1) * G.order] for i in range(G.order)
        ]
        cocycle = TwoCocycle(action, table)
    else:
        cocycle = TwoCocycle.zero(action)
    return Extension(A, G, action, cocycle)


# ---------------------------------------------------------------------------
# class group cache


def _cache_path(config: dict, box: Optional[int]) -> Optional[str]:
    root = os.environ.get("PRINCHEB_CACHE")
    if not root:
        return None
    key = json.dumps(
        {"config": config, "box": box},
        sort_keys=True,
        separators=(",", ":"),
    )
    digest = hashlib.sha256(key.encode()).hexdigest()[:32]
    return os.path.join(root, f"cg-{digest}.json")


def _class_group_payload(CG: ClassGroupData) -> dict:
    return {
        "factor_base": [
            {"p": P.p, "e": P.e, "f": P.f, "basis": [list(r) for r in P.basis]}
            for P in CG.factor_base
        ],
        "relations": [list(r) for r in CG.relation_matrix.entries],
        "cols": CG.relation_matrix.cols,
        "structure": list(CG.structure.invariant_factors),
        "class_map": [list(e.coords) for e in CG.class_map],
        "certification": CG.certification,
        "excluded_primes": list(CG.excluded_primes),
        "witnesses": [
            [w[0], list(w[1]) if isinstance(w[1], (list, tuple)) else w[1]]
            for w in CG.witnesses
        ],
    }


def _class_group_from_payload(
    K: FieldDescription, payload: dict
) -> ClassGroupData:
    fb = tuple(
        PrimeIdeal(e["p"], e["e"], e["f"], e["basis"])
        for e in payload["factor_base"]
    )
    structure = AbelianGroup(tuple(int(d) for d in payload["structure"]))
    class_map = tuple(
        structure.element([int(x) for x in e]) for e in payload["class_map"]
    )
    if len(class_map) != len(fb):
        raise DataError("cached class map does not match the factor base")
    witnesses = tuple(
        (w[0], tuple(w[1]) if isinstance(w[1], list) else w[1])
        for w in payload["witnesses"]
    )
    return ClassGroupData(
        field=K,
        factor_base=fb,
        relation_matrix=IntMatrix(
            payload["relations"], cols=int(payload["cols"])
        ),
        structure=structure,
        class_map=class_map,
        certification=str(payload["certification"]),
        excluded_primes=tuple(int(p) for p in payload["excluded_primes"]),
        witnesses=witnesses,
    )


def _obtain_class_group(
    K: FieldDescription, config: dict, box: Optional[int]
) -> ClassGroupData:
    path = _cache_path(config, box)
    if path is not None and os.path.exists(path):
        try:
            with open(path) as fh:
                payload = json.load(fh)
            return _class_group_from_payload(K, payload)
        except (OSError, ValueError, KeyError, IndexError, TypeError):
            pass  # damaged cache entries are recomputed, never trusted
    CG = class_group(K, box=box)
    if path is not None:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(
            dir=os.path.dirname(path), suffix=".tmp"
        )
        with os.fdopen(fd, "w") as fh:
            json.dump(_class_group_payload(CG), fh)
        os.replace(tmp, path)
    return CG


# ---------------------------------------------------------------------------
# rendering


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _rat_json(q: Fraction) -> dict:
    return {"rational": _frac_str(q), "decimal": float(q)}


def _rat_text(q: Fraction) -> str:
    return f"{_frac_str(q)} ({float(q):.6f})"


def _factors_str(factors) -> str:
    return ",".join(str(d) for d in factors) if factors else "1"


def _emit_json(obj) -> None:
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _field_summary(K: FieldDescription) -> dict:
    return {
        "kind": K.kind,
        "degree": K.degree,
        "signature": list(K.signature),
        "discriminant": K.discriminant,
        "index": K.index,
    }


def _gold_text(cert: Optional[dict]) -> str:
    if cert is None:
        return "none"
    if cert["condition"] == "cyclic-over-rationals":
        return f"cyclic over Q (generator element {cert['witness']})"
    return f"totally ramified at {cert['witness']}"


# ---------------------------------------------------------------------------
# subcommands


def cmd_field_info(args) -> int:
    config = _field_config(_load_config(args.config))
    K = field_from_config(config)
    CG = _obtain_class_group(K, config, args.box)
    mb = minkowski_bound(K)
    lb = lenstra_class_bound(K)
    certified = CG.certification.startswith("certified")
    bk = bach_sorenson_bound(K, CG.order) if certified else None
    if args.json:
        _emit_json(
            {
                **_field_summary(K),
                "minkowski_bound": _rat_json(mb),
                "lenstra_bound": lb,
                "class_number": CG.order,
                "class_group": list(CG.structure.invariant_factors),
                "certification": CG.certification,
                "excluded_primes": list(CG.excluded_primes),
                "bach_sorenson_bound": bk,
                "grh_conditional": True,
            }
        )
        return 0
    print(f"kind: {K.kind}")
    print(f"degree: {K.degree}")
    print(f"signature: ({K.signature[0]}, {K.signature[1]})")
    print(f"discriminant: {K.discriminant}")
    print(f"minkowski bound: {_rat_text(mb)}")
    print(f"lenstra bound (GRH): {lb}")
    print(
        f"class number: {CG.order} ({CG.certification}), "
        f"group {_factors_str(CG.structure.invariant_factors)}"
    )
    if CG.excluded_primes:
        print(
            "excluded primes: "
            + ", ".join(str(p) for p in CG.excluded_primes)
        )
    if bk is not None:
        print(f"bach-sorenson bound (GRH, h = {CG.order}): {bk}")
    else:
        print("bach-sorenson bound: unavailable (class group not certified)")
    return 0


def cmd_field_classgroup(args) -> int:
    config = _field_config(_load_config(args.config))
    K = field_from_config(config)
    CG = _obtain_class_group(K, config, args.box)
    if args.json:
        _emit_json(
            {
                "field": _field_summary(K),
                "invariant_factors": list(CG.structure.invariant_factors),
                "class_number": CG.order,
                "certification": CG.certification,
                "excluded_primes": list(CG.excluded_primes),
                "factor_base": [
                    {
                        "p": P.p,
                        "e": P.e,
                        "f": P.f,
                        "norm": P.norm,
                        "class": list(CG.class_map[i].coords),
                    }
                    for i, P in enumerate(CG.factor_base)
                ],
                "grh_conditional": True,
            }
        )
        return 0
    print(f"class group: {_factors_str(CG.structure.invariant_factors)}")
    print(f"class number: {CG.order}")
    print(f"certification: {CG.certification}")
    for i, P in enumerate(CG.factor_base):
        cls = CG.class_map[i]
        print(
            f"  prime p = {P.p} (e = {P.e}, f = {P.f}, norm {P.norm})"
            f" -> class {list(cls.coords)}"
        )
    if CG.excluded_primes:
        print(
            "excluded primes: "
            + ", ".join(str(p) for p in CG.excluded_primes)
        )
    return 0


def _scan_summary(K, CG, records, m):
    total = len(records)
    order = K.galois_group.order
    counts = [0] * order
    for r in records:
        if r.status != "scanned":
            continue
        if m % r.principal_order == 0:
            counts[r.frobenius_class] += 1
    rows = []
    for c in range(order):
        rows.append(
            {
                "class_representative": c,
                "label": K.element_labels[c],
                "m": m,
                "numerator": counts[c],
                "denominator": total,
                **_rat_json(Fraction(counts[c], total)),
            }
        )
    return rows


def cmd_scan(args) -> int:
    if args.max_norm < 2:
        raise InputError("--max-norm must be at least 2")
    config = _field_config(_load_config(args.config))
    K = field_from_config(config)
    CG = _obtain_class_group(K, config, args.box)
    records = scan_primes(
        K, args.max_norm, class_data=CG, threads=args.threads
    )
    summary = _scan_summary(K, CG, records, args.m)
    ramified = [r.p for r in records if r.status == "ramified"]
    excluded = [r.p for r in records if r.status == "excluded"]

    if args.json:
        _emit_json(
            {
                "field": _field_summary(K),
                "max_norm": args.max_norm,
                "m": args.m,
                "records": [
                    {
                        "p": r.p,
                        "status": r.status,
                        "frob_rep": r.frobenius_class,
                        "f": r.residue_degree,
                        "principal_order": r.principal_order,
                        "is_principal_split": r.is_principal_split,
                    }
                    for r in records
                ],
                "summary": summary,
                "ramified": ramified,
                "excluded": excluded,
                "certification": CG.certification,
                "grh_conditional": True,
            }
        )
        return 0

    if args.csv:
        writer = csv.writer(sys.stdout)
        writer.writerow(
            ["p", "status", "frob_rep", "f", "principal_order",
             "is_principal_split"]
        )
        for r in records:
            writer.writerow(
                [
                    r.p,
                    r.status,
                    "" if r.frobenius_class is None else r.frobenius_class,
                    "" if r.residue_degree is None else r.residue_degree,
                    "" if r.principal_order is None else r.principal_order,
                    "" if r.is_principal_split is None
                    else int(r.is_principal_split),
                ]
            )
        for row in summary:
            sys.stdout.write(
                f"# class {row['class_representative']} "
                f"({row['label']}), m = {row['m']}: "
                f"{row['numerator']}/{row['denominator']} "
                f"{row['decimal']:.6f}\n"
            )
        return 0

    for r in records:
        if r.status != "scanned":
            print(f"p = {r.p}: {r.status}")
        else:
            print(
                f"p = {r.p}: class {r.frobenius_class} "
                f"({K.element_labels[r.frobenius_class]}), f = "
                f"{r.residue_degree}, principal order {r.principal_order}"
            )
    print(f"primes up to {args.max_norm}: {len(records)}")
    for row in summary:
        q = Fraction(row["numerator"], row["denominator"])
        print(
            f"class {row['class_representative']} ({row['label']}), "
            f"m = {row['m']}: {_rat_text(q)}"
        )
    if ramified:
        print("ramified: " + ", ".join(str(p) for p in ramified))
    if excluded:
        print("excluded: " + ", ".join(str(p) for p in excluded))
    return 0


def cmd_density(args) -> int:
    cfg = _load_config(args.config)
    ext = _extension_from_config(cfg)
    rep = args.rep
    if not 0 <= rep < ext.group.order:
        raise InputError(
            f"class representative {rep} outside the group "
            f"(order {ext.group.order})"
        )
    cls = next(
        c for c in conjugacy_classes(ext.group) if rep in c.members
    )
    value = principal_density(ext, cls, args.m)
    positive, cert = positivity(ext, cls, args.m)
    if positive != (value.value > 0):
        raise InternalCheckError(
            "positivity criterion disagrees with the enumerated density"
        )
    cert_obj = (
        None
        if cert is None
        else {
            "divisor": cert.divisor,
            "g": cert.g,
            "section": [list(s) for s in cert.section],
        }
    )
    if args.json:
        _emit_json(
            {
                "class_representative": cls.representative,
                "class_members": list(cls.members),
                "common_order": cls.common_order,
                "m": args.m,
                "density": _rat_json(value.value),
                "witness_count": value.witness_set_size,
                "extension_order": ext.order,
                "positive": positive,
                "certificate": cert_obj,
            }
        )
        return 0
    print(
        f"class {cls.representative} (members {list(cls.members)}, "
        f"common order {cls.common_order})"
    )
    print(f"m: {args.m}")
    print(f"density: {_rat_text(value.value)}")
    print(
        f"witnesses: {value.witness_set_size} of {ext.order} "
        f"extension elements"
    )
    print(f"positive: {'yes' if positive else 'no'}")
    if cert is not None:
        print(
            f"positivity certificate: divisor {cert.divisor}, "
            f"g = {cert.g}, section over the quotient recorded"
        )
    return 0


def cmd_recover(args) -> int:
    cfg = _load_config(args.config)
    ext = _extension_from_config(cfg)
    table = density_table_for_recovery(ext)
    recovered = class_group_from_densities(table)
    if recovered.invariant_factors != ext.kernel.invariant_factors:
        raise InternalCheckError(
            f"recovered {recovered.invariant_factors} from densities, "
            f"kernel is {ext.kernel.invariant_factors}"
        )
    if args.json:
        _emit_json(
            {
                "invariant_factors": list(recovered.invariant_factors),
                "kernel_order": recovered.order,
                "table": {
                    str(m): _rat_json(v.value)
                    for m, v in sorted(table.items())
                },
            }
        )
        return 0
    print(_factors_str(recovered.invariant_factors))
    return 0


def cmd_hes_verify(args) -> int:
    config = _field_config(_load_config(args.config))
    K = field_from_config(config)
    CG = _obtain_class_group(K, config, args.box)
    if not CG.certification.startswith("certified"):
        raise PreconditionError(
            f"class group certification is {CG.certification!r}; "
            "refusing to draw conclusions from an uncertified group"
        )
    verdict = hes_nonsplit_test(K, class_data=CG, threads=args.threads)
    gold = gold_certificate(K)
    if args.json:
        _emit_json(
            {
                "field": _field_summary(K),
                "class_number": verdict.class_number,
                "certification": CG.certification,
                "bound": verdict.bound_used,
                "per_class": [
                    {
                        "representative": w.representative,
                        "label": w.label,
                        "witness": w.witness,
                        "witness_count": w.witness_count,
                    }
                    for w in verdict.per_class.values()
                ],
                "excluded_primes": list(verdict.excluded_primes),
                "conclusion": verdict.conclusion,
                "reason": verdict.reason,
                "gold_certificate": gold,
                "grh_conditional": verdict.grh_conditional,
            }
        )
        return 0
    print(
        f"field: {K.kind}, degree {K.degree}, "
        f"discriminant {K.discriminant}"
    )
    print(f"class number: {verdict.class_number} ({CG.certification})")
    print(f"scan bound: {verdict.bound_used}")
    for w in verdict.per_class.values():
        if w.witness is None:
            print(f"class {w.representative} ({w.label}): no witness")
        else:
            print(
                f"class {w.representative} ({w.label}): witness "
                f"p = {w.witness}, {w.witness_count} total"
            )
    if verdict.excluded_primes:
        print(
            "excluded primes: "
            + ", ".join(str(p) for p in verdict.excluded_primes)
        )
    print(f"gold certificate: {_gold_text(gold)}")
    line = f"conclusion: {verdict.conclusion}"
    if verdict.grh_conditional:
        line += " (conditional on GRH)"
    print(line)
    if verdict.reason:
        print(f"reason: {verdict.reason}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing and dispatch


def _add_box(p):
    p.add_argument(
        "--box",
        type=int,
        default=None,
        help="starting coefficient box for the relation search",
    )


def _add_threads(p):
    p.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker threads for prime scans (output is identical)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="princheb",
        description=(
            "Class groups, Frobenius scans, and principal density "
            "reports for abelian fields and group extensions."
        ),
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    field = sub.add_parser("field", help="field reports")
    fsub = field.add_subparsers(dest="sub", required=True)

    info = fsub.add_parser("info", help="degrees, discriminants, bounds")
    info.add_argument("config", help="field config (JSON inline or path)")
    info.add_argument("--json", action="store_true")
    _add_box(info)

    cg = fsub.add_parser("classgroup", help="class group structure")
    cg.add_argument("config", help="field config (JSON inline or path)")
    cg.add_argument("--json", action="store_true")
    _add_box(cg)

    scan = sub.add_parser("scan", help="scan primes up to a bound")
    scan.add_argument("config", help="field config (JSON inline or path)")
    scan.add_argument(
        "--max-norm", type=int, required=True, help="largest prime scanned"
    )
    scan.add_argument(
        "--m", type=int, default=1, help="principality exponent for summaries"
    )
    scan.add_argument("--json", action="store_true")
    scan.add_argument("--csv", action="store_true")
    _add_threads(scan)
    _add_box(scan)

    dens = sub.add_parser("density", help="exact density of one class")
    dens.add_argument(
        "config", help="extension config (JSON inline or path)"
    )
    dens.add_argument(
        "--class",
        dest="rep",
        type=int,
        default=0,
        help="representative of the conjugacy class",
    )
    dens.add_argument("--m", type=int, default=1)
    dens.add_argument("--json", action="store_true")

    rec = sub.add_parser(
        "recover", help="kernel invariant factors from identity densities"
    )
    rec.add_argument("config", help="extension config (JSON inline or path)")
    rec.add_argument("--json", action="store_true")

    hes = sub.add_parser("hes", help="Hilbert exact sequence checks")
    hsub = hes.add_subparsers(dest="sub", required=True)
    verify = hsub.add_parser(
        "verify", help="bounded scan for a nonsplitting certificate"
    )
    verify.add_argument("config", help="field config (JSON inline or path)")
    verify.add_argument("--json", action="store_true")
    _add_threads(verify)
    _add_box(verify)

    return parser


def _dispatch(args) -> int:
    if args.cmd == "field" and args.sub == "info":
        return cmd_field_info(args)
    if args.cmd == "field" and args.sub == "classgroup":
        return cmd_field_classgroup(args)
    if args.cmd == "scan":
        return cmd_scan(args)
    if args.cmd == "density":
        return cmd_density(args)
    if args.cmd == "recover":
        return cmd_recover(args)
    if args.cmd == "hes" and args.sub == "verify":
        return cmd_hes_verify(args)
    raise InputError(f"unknown command {args.cmd!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except BrokenPipeError:
        return 0
    except (
        InputError,
        DataError,
        PreconditionError,
        FormulaInapplicable,
        ExcludedPrime,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (Undecided, InternalCheckError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
