"""Command-line interface.

    ahp-readiness validate    --hierarchy FILE
    ahp-readiness weights     --hierarchy FILE --sessions FILE ... [--method evm|rgmm]
    ahp-readiness score       --hierarchy FILE --assessment FILE [--out DIR]
    ahp-readiness sensitivity --hierarchy FILE --assessment FILE
    ahp-readiness serve       --hierarchy FILE [--bind HOST:PORT]

Exit codes: 0 success, 1 domain failure (violations, gate refusals),
2 unreadable or unparseable input. AHP_READINESS_OUT sets the default
output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .fileio import (
    FileFormatError,
    load_assessment,
    load_hierarchy,
    load_session,
    save_json,
)
from .hierarchy import validate_hierarchy
from .reporting import format_fixed, render_report
from .scoring import evaluate
from .weighting import derivation_document, derive_weight_table


def _default_out() -> str:
    return os.environ.get("AHP_READINESS_OUT", ".")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ahp-readiness",
        description="Group-AHP criteria weighting and readiness scoring",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check a hierarchy file's invariants")
    p_validate.add_argument("--hierarchy", required=True)

    p_weights = sub.add_parser("weights", help="derive criteria weights from sessions")
    p_weights.add_argument("--hierarchy", required=True)
    p_weights.add_argument("--sessions", action="append", required=True,
                           help="session file; repeat once per hierarchy node")
    p_weights.add_argument("--method", choices=("evm", "rgmm"), default="evm")
    p_weights.add_argument("--out", default=None)
    p_weights.add_argument("--allow-inconsistent", action="store_true",
                           help="keep going when a session fails the 10%% gate")

    p_score = sub.add_parser("score", help="score an assessment and write reports")
    p_score.add_argument("--hierarchy", required=True)
    p_score.add_argument("--assessment", required=True)
    p_score.add_argument("--out", default=None)

    p_sens = sub.add_parser("sensitivity", help="rank one-level improvement gains")
    p_sens.add_argument("--hierarchy", required=True)
    p_sens.add_argument("--assessment", required=True)

    p_serve = sub.add_parser("serve", help="run the live elicitation session service")
    p_serve.add_argument("--hierarchy", required=True)
    p_serve.add_argument("--bind", default="127.0.0.1:8000")
    p_serve.add_argument("--out", default=None)
    return parser


def cmd_validate(args) -> int:
    hierarchy = load_hierarchy(args.hierarchy)
    violations = validate_hierarchy(hierarchy)
    for violation in violations:
        print(violation)
    if violations:
        return 1
    print(f"{args.hierarchy}: ok ({len(hierarchy.categories)} categories, "
          f"{len(hierarchy.criteria)} criteria)")
    return 0


def cmd_weights(args) -> int:
    hierarchy = load_hierarchy(args.hierarchy)
    sessions = [load_session(path) for path in args.sessions]
    derivation = derive_weight_table(
        hierarchy, sessions, method=args.method,
        allow_inconsistent=args.allow_inconsistent,
    )
    for session in derivation.sessions:
        consensus = session.consensus
        notice = f" [{consensus.notice}]" if consensus.notice else ""
        print(
            f"session {session.node}: cr {session.priorities.cr:.4f} "
            f"({'ok' if session.priorities.acceptable else 'INCONSISTENT'}), "
            f"consensus {format_fixed(consensus.s_star * 100, 1)}% "
            f"({consensus.interpretation}){notice}"
        )
        if not consensus.acceptable and consensus.notice is None:
            print(f"warning: session {session.node} consensus below 75%", file=sys.stderr)
    for row in derivation.table.by_rank():
        print(f"{row.rank:3d}  {row.criterion_id:6s} {format_fixed(row.aggregated_weight, 3)}")
    out_dir = Path(args.out or _default_out())
    out_path = out_dir / f"weights-{args.method}.json"
    save_json(derivation_document(derivation), out_path)
    print(f"wrote {out_path}")
    return 0


def cmd_score(args) -> int:
    hierarchy = load_hierarchy(args.hierarchy)
    assessment = load_assessment(args.assessment)
    result = evaluate(hierarchy, assessment)
    out_dir = Path(args.out or _default_out())
    slug = "-".join(result.subject.split())
    json_path = out_dir / f"{slug}-report.json"
    md_path = out_dir / f"{slug}-report.md"
    document = render_report(result, "json")
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path.write_text(document, encoding="utf-8")
    md_path.write_text(render_report(result, "markdown"), encoding="utf-8")
    print(f"wrote {json_path}")
    print(f"wrote {md_path}")
    print(f"overall {format_fixed(result.overall_index * 100, 1)}%")
    return 0


def cmd_sensitivity(args) -> int:
    hierarchy = load_hierarchy(args.hierarchy)
    assessment = load_assessment(args.assessment)
    result = evaluate(hierarchy, assessment)
    for criterion_id, delta in result.sensitivity:
        print(f"{criterion_id:6s} +{format_fixed(delta, 4)}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"--bind must look like HOST:PORT, got {args.bind!r}")
    app = create_app(hierarchy_path=args.hierarchy, data_dir=args.out or _default_out())
    uvicorn.run(app, host=host, port=int(port))
    return 0


_COMMANDS = {
    "validate": cmd_validate,
    "weights": cmd_weights,
    "score": cmd_score,
    "sensitivity": cmd_sensitivity,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (FileFormatError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
