"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import catalanimal as cat
from .llt import coproduct_statistic, llt
from .macnabla import DEGREE_CAP, DegreeCapExceeded, nabla_pow
from .qtcoeff import format_rational
from .shapes import SkewTuple, lower_ideals, stats
from .symfunc import omega, to_json as sym_json, to_text

OK, FAILED, BAD_INPUT, CAP = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} is not valid JSON: {exc}") from None


def _tuple(args) -> SkewTuple:
    if not args.tuple:
        raise InputError("--tuple is required")
    return SkewTuple.from_json(_load_json(args.tuple, "--tuple"))


def _offsets(args, t: SkewTuple):
    if getattr(args, "stretch", None):
        spec = _load_json(args.stretch, "--stretch")
        args.m = int(spec["m"])
        return tuple(int(o) for o in spec["offsets"])
    if args.offsets is None:
        return cat.default_offsets(t)
    text = args.offsets.strip()
    vals = _load_json(text, "--offsets") if text.startswith("[") else [int(x) for x in text.split(",") if x.strip()]
    return tuple(int(v) for v in vals)


def _catalanimal(args):
    """A Catalanimal from --catalanimal JSON or built from --tuple with (m, n, offsets)."""
    if getattr(args, "catalanimal", None):
        return cat.Catalanimal.from_json(_load_json(args.catalanimal, "--catalanimal")), None
    t = _tuple(args)
    offs = _offsets(args, t)
    return cat.build_llt_mn(t, args.m, args.n, offs), (t, offs)


def _emit(args, text: str, payload):
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_llt(args) -> int:
    t = _tuple(args)
    g = llt(t, args.nvars)
    _emit(args, to_text(g), sym_json(g))
    return OK


def cmd_cat(args) -> int:
    c, _ = _catalanimal(args)
    text = json.dumps(c.to_json())
    if args.render:
        text += "\n" + cat.render(c)
    payload = c.to_json()
    if args.render:
        payload = {"catalanimal": payload, "render": cat.render(c)}
    _emit(args, text, payload)
    return OK


def cmd_render(args) -> int:
    c, _ = _catalanimal(args)
    _emit(args, cat.render(c), {"render": cat.render(c)})
    return OK


def cmd_nabla(args) -> int:
    t = _tuple(args)
    if len(t) == 0:
        raise InputError("the tuple must have at least one box")
    if len(t) > DEGREE_CAP:
        raise DegreeCapExceeded(f"degree {len(t)} exceeds the Macdonald basis cap {DEGREE_CAP}")
    offs = _offsets(args, t)
    m = args.m
    scalar, _ = cat.expected_cub(t, m, 1, offs)
    via_h = cat.h_pol(cat.build_llt_mn(t, m, 1, offs), jobs=args.jobs).to_symfunc().scale(1 / scalar)
    via_oracle = omega(nabla_pow(llt(t), m))
    match = via_h == via_oracle
    lines = [
        f"raising-operator route: {to_text(via_h)}",
        f"Macdonald route:        {to_text(via_oracle)}",
        "MATCH" if match else "MISMATCH",
    ]
    _emit(args, "\n".join(lines), {"h_pol": sym_json(via_h), "oracle": sym_json(via_oracle), "match": match})
    return OK if match else FAILED


def cmd_check(args) -> int:
    if args.what == "cuddly":
        c, _ = _catalanimal(args)
        rep = cat.check_cuddly(c, args.m, args.n)
        lines = [f"tame: {rep.tame}", f"degree: {rep.degree_ok}"]
        for I, v, b in rep.violations:
            lines.append(f"violation I={list(I)}: |lambda[I]_I| = {v} > {b}")
        lines.append("tight subsets: " + " ".join("{" + ",".join(map(str, I)) + "}" for I in rep.tight_subsets))
        lines.append("PASS" if rep.cuddly else "FAIL")
        _emit(args, "\n".join(lines), rep.to_json())
        return OK if rep.cuddly else FAILED
    if args.what == "wheel":
        c, _ = _catalanimal(args)
        ok = cat.wheel_check(c, args.trials, args.seed)
        _emit(args, "PASS" if ok else "FAIL", {"wheel": ok, "trials": args.trials, "seed": args.seed})
        return OK if ok else FAILED
    t = _tuple(args)
    offs = _offsets(args, t)
    tr = cat.verify_cub(t, args.m, args.n, offs, args.depth)
    _emit(args, tr.text(), {"ok": tr.ok, "transcript": tr.lines})
    return OK if tr.ok else FAILED


def cmd_spec(args) -> int:
    c, _ = _catalanimal(args)
    val = cat.principal_spec(c)
    _emit(args, format_rational(val), {"principal_specialization": format_rational(val)})
    return OK


def cmd_coprod(args) -> int:
    t = _tuple(args)
    rows, lines = [], []
    for ideal in sorted(lower_ideals(t), key=lambda s: (len(s), sorted(s))):
        comp = [i for i in range(1, len(t) + 1) if i not in ideal]
        a = coproduct_statistic(t, ideal)
        lo, hi = llt(t.subtuple(sorted(ideal))), llt(t.subtuple(comp))
        rows.append({"ideal": sorted(ideal), "A": a, "lower": to_text(lo), "upper": to_text(hi)})
        lines.append(f"{{{','.join(map(str, sorted(ideal)))}}}  q^{a}  X: {to_text(lo)}  Y: {to_text(hi)}")
    st = stats(t)
    lines.append(f"p={st.magic_p} gamma={list(st.gamma)} n'={st.n_prime} A={st.attack_A}")
    _emit(args, "\n".join(lines), {"splits": rows, "stats": st.__dict__})
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="catalanimals", description="LLT Catalanimals, cubs and nabla.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, build=True):
        sp.add_argument("--tuple", help='skew tuple JSON, e.g. {"shapes":[{"outer":[3,2],"inner":[1]}]}')
        if build:
            sp.add_argument("--m", type=int, default=1)
            sp.add_argument("--n", type=int, default=0)
            sp.add_argument("--offsets", help="comma list or JSON array; defaults to zeros")
            sp.add_argument("--stretch", help='stretch JSON, e.g. {"m":3,"offsets":[-4,-2]}')
            sp.add_argument("--catalanimal", help="Catalanimal JSON (instead of --tuple)")
        for name in ("--format", "--seed", "--trials", "--jobs"):
            kw = {"choices": ("text", "json")} if name == "--format" else {"type": int}
            sp.add_argument(name, default=argparse.SUPPRESS, **kw)

    sp = sub.add_parser("llt", help="LLT polynomial in the Schur basis")
    common(sp, build=False)
    sp.add_argument("--nvars", type=int, default=None)
    sp.set_defaults(func=cmd_llt)

    sp = sub.add_parser("cat", help="build an LLT Catalanimal")
    common(sp)
    sp.add_argument("--render", action="store_true")
    sp.set_defaults(func=cmd_cat)

    sp = sub.add_parser("render", help="ASCII drawing of a Catalanimal")
    common(sp)
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("nabla", help="omega nabla^m G by both routes")
    common(sp, build=False)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--offsets")
    sp.set_defaults(func=cmd_nabla)

    sp = sub.add_parser("check", help="cuddliness, cub or wheel verification")
    sp.add_argument("what", choices=("cuddly", "cub", "wheel"))
    common(sp)
    sp.add_argument("--depth", type=int, default=None, help="recursion depth for cub checks")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("spec", help="principal specialization of phi")
    common(sp)
    sp.set_defaults(func=cmd_spec)

    sp = sub.add_parser("coprod", help="LLT coproduct table over lower ideals")
    common(sp, build=False)
    sp.set_defaults(func=cmd_coprod)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except (cat.CapExceeded, DegreeCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CAP
    except (InputError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
