"""Command-line front end.

    mipcert verify --n 4 --m 3
    mipcert certify --n 4 --m 3 --out cert.txt
    mipcert check-cert cert.txt
    mipcert groups --n 4 --m 3
    mipcert jennings --n 4 --m 3
    mipcert oracle-iso --n 4 --m 3
    mipcert eval --n 4 --m 3 "b(a+b+ab)c"

Exit status is 0 exactly when every reported check passed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .galgebra import GroupAlgebra
from .mipverify import (
    algebra_invariant_fingerprint,
    brute_force_iso_search,
    run_pipeline,
    verify_certificate,
    verify_nonisomorphism,
)
from .parsing import ParseError, parse_algebra_literal, parse_presentation_file
from .pcgroup import PresentationError, build_G, build_H

log = logging.getLogger("mipcert")

COMMANDS = ("groups", "verify", "certify", "check-cert", "jennings", "oracle-iso", "eval")


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    m: int | None = None
    out: str | None = None
    seed: int = 0
    exhaustive_mult: bool | None = None
    format: str = "json"
    verbosity: int = 0
    timings: bool = False
    presentation: str | None = None
    g_presentation: str | None = None
    group: str = "H"
    expr: str | None = None
    cert: str | None = None
    xtilde: str | None = None
    ytilde: str | None = None
    self_check: bool = False


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mipcert", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, params=True):
        if params:
            p.add_argument("--n", type=int)
            p.add_argument("--m", type=int)
        p.add_argument("--out", help="write the main output here instead of stdout")
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--exhaustive-mult", type=_bool, default=None, dest="exhaustive_mult",
                       help="force (true) or forbid (false) the all-pairs multiplicativity check")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("-v", "--verbose", action="count", default=0, dest="verbosity")

    p = sub.add_parser("groups", help="build G and H, print fingerprints and the non-isomorphism witness")
    common(p)
    p.add_argument("--presentation", help="presentation file to use instead of the G/H pair")

    p = sub.add_parser("verify", help="run every step of the argument and print a report")
    common(p)
    p.add_argument("--timings", action="store_true", help="include per-step timings in the report")
    p.add_argument("--xtilde", help="algebra literal replacing a")
    p.add_argument("--ytilde", help="algebra literal replacing b(a+b+ab)c")
    p.add_argument("--g-presentation", dest="g_presentation", help="presentation file replacing G(n,m)")

    p = sub.add_parser("certify", help="emit the change-of-basis certificate")
    common(p)

    p = sub.add_parser("check-cert", help="independently re-check a certificate file")
    common(p, params=False)
    p.add_argument("cert")

    p = sub.add_parser("jennings", help="augmentation ideal filtration and dimension subgroups")
    common(p)
    p.add_argument("--presentation")

    p = sub.add_parser("oracle-iso", help="brute-force isomorphism search G -> H (order at most 2^10)")
    common(p)
    p.add_argument("--self", action="store_true", dest="self_check", help="search G -> G instead")

    p = sub.add_parser("eval", help="evaluate an algebra literal and print its support")
    common(p)
    p.add_argument("--group", choices=("G", "H"), default="H")
    p.add_argument("--presentation")
    p.add_argument("expr")
    return parser


def parse_config(argv=None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__})
    needs_params = cfg.command in ("groups", "verify", "certify", "jennings", "oracle-iso", "eval")
    if needs_params and not getattr(ns, "presentation", None):
        if cfg.n is None or cfg.m is None:
            parser.error(f"{cfg.command} needs --n and --m")
        if not cfg.n > cfg.m > 2:
            parser.error(f"parameters must satisfy n > m > 2, got n={cfg.n}, m={cfg.m}")
    return cfg


def _emit(cfg: RunConfig, payload: dict, text: str | None = None):
    if cfg.format == "json" or text is None:
        out = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    else:
        out = text if text.endswith("\n") else text + "\n"
    if cfg.out:
        Path(cfg.out).write_text(out)
    else:
        sys.stdout.write(out)


def _load_presentation(path: str, check: bool = True):
    return parse_presentation_file(Path(path).read_text(), check=check).presentation


def _report_text(d: dict) -> str:
    lines = [f"G({d['n']},{d['m']}) vs H({d['n']},{d['m']}), order {d['order']}, seed {d['seed']}"]
    for s in d["steps"]:
        mark = "ok  " if s["status"] == "verified" else "FAIL"
        lines.append(f"  [{mark}] {s['name']}: {s['statement']}")
        if s["status"] != "verified":
            lines.append(f"         {json.dumps(s['witness'])[:400]}")
    lines.append("all steps verified" if d["ok"] else "FAILED: " + ", ".join(d["failed"]))
    return "\n".join(lines)


def cmd_verify(cfg: RunConfig) -> int:
    # consistency is left to the pipeline so that a bad G shows up as a failed step
    pG = _load_presentation(cfg.g_presentation, check=False) if cfg.g_presentation else None
    report, _ = run_pipeline(cfg.n, cfg.m, cfg.seed, cfg.exhaustive_mult, cfg.xtilde, cfg.ytilde, pG=pG)
    d = report.to_dict(timings=cfg.timings)
    _emit(cfg, d, _report_text(d))
    return 0 if report.ok else 1


def cmd_certify(cfg: RunConfig) -> int:
    report, cert = run_pipeline(cfg.n, cfg.m, cfg.seed, cfg.exhaustive_mult, with_fingerprints=False)
    if cert is None or not report.ok:
        d = report.to_dict()
        sys.stderr.write(_report_text(d) + "\n")
        return 1
    text = cert.to_text()
    if cfg.out:
        Path(cfg.out).write_text(text)
        log.info("certificate written to %s", cfg.out)
    else:
        sys.stdout.write(text)
    return 0


def cmd_check_cert(cfg: RunConfig) -> int:
    text = Path(cfg.cert).read_text()
    result = verify_certificate(text, cfg.exhaustive_mult, cfg.seed)
    payload = {"schema": "mip-certcheck/1", "file": cfg.cert, "ok": result.ok, "reasons": result.reasons}
    if result.details:
        payload["checks"] = result.details
    _emit(cfg, payload, "certificate verified" if result.ok else "certificate REJECTED: " + "; ".join(result.reasons))
    return 0 if result.ok else 1


def cmd_groups(cfg: RunConfig) -> int:
    if cfg.presentation:
        p = _load_presentation(cfg.presentation)
        fp = algebra_invariant_fingerprint(GroupAlgebra(p))
        _emit(cfg, {"presentation": cfg.presentation, "consistent": True, "fingerprint": fp},
              f"{cfg.presentation}: consistent, order {fp['order']}, {fp['class_count']} classes")
        return 0
    pG, pH = build_G(cfg.n, cfg.m), build_H(cfg.n, cfg.m)
    step = verify_nonisomorphism(cfg.n, cfg.m, pG, pH)
    fG = algebra_invariant_fingerprint(GroupAlgebra(pG))
    fH = algebra_invariant_fingerprint(GroupAlgebra(pH))
    payload = {"n": cfg.n, "m": cfg.m, "G": fG, "H": fH, "nonisomorphism": step.to_dict()}
    text = (
        f"|G| = {fG['order']}, |H| = {fH['order']}\n"
        f"exp C_G(G') = {step.witness['exponent_G']}, exp C_H(H') = {step.witness['exponent_H']}: "
        + ("not isomorphic" if step.verified else "no witness")
    )
    _emit(cfg, payload, text)
    return 0 if step.verified else 1


def cmd_jennings(cfg: RunConfig) -> int:
    if cfg.presentation:
        algebras = {cfg.presentation: GroupAlgebra(_load_presentation(cfg.presentation))}
    else:
        algebras = {"G": GroupAlgebra(build_G(cfg.n, cfg.m)), "H": GroupAlgebra(build_H(cfg.n, cfg.m))}
    payload = {}
    lines = []
    for label, kG in algebras.items():
        F = kG.filtration
        D = kG.dimension_subgroups()
        payload[label] = {
            "quotient_dims": F.quotient_dims,
            "nilpotency_index": F.nilpotency_index,
            "dimension_subgroup_orders": [d.order for d in D],
        }
        lines.append(f"{label}: dim I^k/I^(k+1) = {F.quotient_dims}; |D_k| = {[d.order for d in D]}")
    _emit(cfg, payload, "\n".join(lines))
    return 0


def cmd_oracle(cfg: RunConfig) -> int:
    pG = build_G(cfg.n, cfg.m)
    pH = pG if cfg.self_check else build_H(cfg.n, cfg.m)
    try:
        res = brute_force_iso_search(pG, pH)
    except ValueError as exc:
        sys.stderr.write(f"oracle-iso: {exc}\n")
        return 2
    target = "G" if cfg.self_check else "H"
    payload = {
        "n": cfg.n,
        "m": cfg.m,
        "target": target,
        "exhausted": res.exhausted,
        "isomorphism": None if res.exhausted else [pH.format(u) for u in res.isomorphism],
        "pairs_tested": res.pairs_tested,
        "relation_survivors": res.relation_survivors,
        "generating_survivors": res.generating_survivors,
    }
    if res.exhausted:
        text = f"no isomorphism G -> {target}: {res.pairs_tested} generator images exhausted"
    else:
        text = f"isomorphism G -> {target}: x -> {payload['isomorphism'][0]}, y -> {payload['isomorphism'][1]}"
    _emit(cfg, payload, text)
    return 0


def cmd_eval(cfg: RunConfig) -> int:
    if cfg.presentation:
        p = _load_presentation(cfg.presentation)
    else:
        p = build_G(cfg.n, cfg.m) if cfg.group == "G" else build_H(cfg.n, cfg.m)
    kG = GroupAlgebra(p)
    alpha = parse_algebra_literal(cfg.expr, kG)
    support = [p.format(p.element(int(i))) for i in alpha.support()]
    payload = {"expr": cfg.expr, "support": support, "augmentation": alpha.augmentation()}
    _emit(cfg, payload, " + ".join(support) or "0")
    return 0


HANDLERS = {
    "groups": cmd_groups,
    "verify": cmd_verify,
    "certify": cmd_certify,
    "check-cert": cmd_check_cert,
    "jennings": cmd_jennings,
    "oracle-iso": cmd_oracle,
    "eval": cmd_eval,
}


def run(cfg: RunConfig) -> int:
    logging.basicConfig(level=logging.WARNING - 10 * min(cfg.verbosity, 2), format="%(name)s: %(message)s")
    try:
        return HANDLERS[cfg.command](cfg)
    except ParseError as exc:
        sys.stderr.write(f"mipcert {cfg.command}: {exc}\n")
        return 1
    except (PresentationError, OSError) as exc:
        sys.stderr.write(f"mipcert {cfg.command}: {exc}\n")
        return 1


def main(argv=None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
