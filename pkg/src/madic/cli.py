"""Command-line front end.

Subcommands: section, project, wordlen, portrait, verify, normalize, split,
replay.  Exit codes: 0 success / all green, 1 verification failure, 2 usage
error, 3 resource cap or budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .calculus import GroupParams, Vertex, portrait, section
from .errors import (
    BudgetExhaustedError,
    CertificationError,
    MadicError,
    PreconditionError,
    ResourceCapError,
)
from .geodesics import geodesic_length
from .projections import Budget, normalize_to_permuted_product, rightmost_projection
from .prodense import Transcript, isolate_generators, make_prodense_seeds, replay_transcript
from .report import (
    SUITES,
    portrait_dot,
    render_portrait_figure,
    render_report_figure,
    run_suite,
    write_report_csv,
)
from .words import Word, format_word, from_pairs, to_pairs


def _parse_word(raw: str, params: GroupParams) -> Word:
    """Inline JSON pair list, or a path to a word record file."""
    text = raw
    if not raw.lstrip().startswith("["):
        text = Path(raw).read_text()
    obj = json.loads(text)
    if isinstance(obj, dict):
        if (obj.get("m"), obj.get("s")) != (params.m, params.s):
            raise PreconditionError(
                f"word record is for (m,s)=({obj.get('m')},{obj.get('s')}), "
                f"not ({params.m},{params.s})"
            )
        obj = obj["word"]
    return from_pairs(obj)


def _emit(args, text_value: str, structured: dict) -> None:
    if args.format == "structured":
        print(json.dumps(structured, indent=2))
    else:
        print(text_value)


def _budget(args, params: GroupParams) -> Budget:
    base = Budget.default(params)
    if getattr(args, "budget_steps", None):
        return Budget(base.max_depth, args.budget_steps)
    return base


def cmd_section(args, params):
    w = _parse_word(args.word, params)
    u = Vertex.from_string(args.vertex)
    result = section(params, w, u)
    _emit(args, format_word(result), {"word": to_pairs(result)})
    return 0


def cmd_project(args, params):
    w = _parse_word(args.word, params)
    result = rightmost_projection(params, w, args.j)
    _emit(args, format_word(result), {"word": to_pairs(result)})
    return 0


def cmd_wordlen(args, params):
    w = _parse_word(args.word, params)
    length = geodesic_length(params, w, args.cap)
    if length is None:
        print(f"longer than the radius cap {args.cap}", file=sys.stderr)
        return 1
    _emit(args, str(length), {"length": length})
    return 0


def cmd_portrait(args, params):
    w = _parse_word(args.word, params)
    p = portrait(params, w, args.depth)
    dot = portrait_dot(p)
    if args.out:
        out = Path(args.out)
        out.with_suffix(".dot").write_text(dot)
        render_portrait_figure(p, params.m, out.with_suffix(".png"))
        print(f"wrote {out.with_suffix('.dot')} and {out.with_suffix('.png')}")
    else:
        print(dot, end="")
    return 0


def cmd_verify(args, params):
    reports = run_suite(params, args.suite, args.radius)
    if args.out:
        out = Path(args.out)
        write_report_csv(reports, out.with_suffix(".csv"))
        render_report_figure(reports, out.with_suffix(".png"))
    if args.format == "structured":
        print(json.dumps([rep.to_dict() for rep in reports], indent=2))
    else:
        for rep in reports:
            status = "ok" if not rep.violations else f"{len(rep.violations)} VIOLATIONS"
            print(
                f"{rep.lemma}: {rep.instances_checked} checked, "
                f"{rep.unverified} unverified, {status}"
            )
            for v in rep.violations[:10]:
                print(f"  {v}")
    return 0 if all(not rep.violations for rep in reports) else 1


def cmd_normalize(args, params):
    w = _parse_word(args.word, params)
    wit = normalize_to_permuted_product(params, w, _budget(args, params))
    _emit(
        args,
        f"vertex {wit.vertex} power m^{wit.exponent_j} -> {format_word(wit.result.word())}",
        wit.to_dict(),
    )
    return 0


def cmd_split(args, params):
    noise = [Word(()) for _ in range(params.s + 1)]
    if args.seed_noise:
        noise = [from_pairs(p) for p in json.loads(args.seed_noise)]
    seeds = make_prodense_seeds(params, noise)
    tr = isolate_generators(params, seeds, _budget(args, params))
    payload = tr.to_json()
    if args.out:
        Path(args.out).write_text(payload)
        print(f"wrote {args.out}")
    if args.format == "structured" and not args.out:
        print(payload)
    else:
        parts = " ".join(format_word(w) for w in tr.final_parts)
        print(f"succeeded: {tr.succeeded}" + (f"; parts: {parts}" if tr.succeeded else ""))
    return 0 if tr.succeeded else 1


def cmd_replay(args, params):
    tr = Transcript.from_json(Path(args.file).read_text())
    ok = replay_transcript(tr)
    print("replay: all moves verified" if ok else "replay: transcript did not succeed")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="madic")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, word=True):
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--s", type=int, required=True)
        if word:
            p.add_argument("--word", required=True, help="JSON pair list or record file")
        p.add_argument("--format", choices=("text", "structured"), default="text")

    p = sub.add_parser("section", help="section of a word at a vertex")
    common(p)
    p.add_argument("--vertex", required=True)
    p.set_defaults(fn=cmd_section)

    p = sub.add_parser("project", help="rightmost projection of g^(m^j)")
    common(p)
    p.add_argument("--j", type=int, required=True)
    p.set_defaults(fn=cmd_project)

    p = sub.add_parser("wordlen", help="exact geodesic length")
    common(p)
    p.add_argument("--cap", type=int, required=True, help="ball radius cap")
    p.set_defaults(fn=cmd_wordlen)

    p = sub.add_parser("portrait", help="depth-truncated portrait")
    common(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", help="output stem; writes .dot and .png")
    p.set_defaults(fn=cmd_portrait)

    p = sub.add_parser("verify", help="run a verification suite")
    common(p, word=False)
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--out", help="output stem; writes .csv and .png")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("normalize", help="permuted-product normalization witness")
    common(p)
    p.add_argument("--budget-steps", type=int)
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("split", help="run the generator-splitting engine")
    common(p, word=False)
    p.add_argument("--seed-noise", help="JSON list of s+1 pair lists")
    p.add_argument("--budget-steps", type=int)
    p.add_argument("--out", help="transcript output file")
    p.set_defaults(fn=cmd_split)

    p = sub.add_parser("replay", help="re-verify a transcript file")
    common(p, word=False)
    p.add_argument("file")
    p.set_defaults(fn=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = GroupParams(args.m, args.s)
        return args.fn(args, params)
    except (ResourceCapError, BudgetExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CertificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    except (MadicError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
