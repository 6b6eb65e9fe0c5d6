"""Command-line interface: serve, apply, metrics, validate, export."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dataset import load_dataset
from .edits import Selection
from .errors import GamEditError
from .metrics import Scope
from .model import recenter
from .protocol import report_to_jsonable, triple_to_jsonable
from .scripting import parse_script, run_script
from .serialize import load_model, save_model
from .server import PortInUse, make_server
from .session import EditorSession


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gamedit",
                                     description="Edit binned GAM models")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, data_required=False):
        p.add_argument("--model", required=True, type=Path, help="model JSON file")
        p.add_argument("--data", required=data_required, type=Path, help="validation CSV")
        p.add_argument("--label-column", default="label")
        p.add_argument("--lenient", action="store_true",
                       help="skip unparsable rows instead of failing")
        p.add_argument("--threshold", type=float, default=0.5,
                       help="classification probability threshold")

    p = sub.add_parser("serve", help="start the local editing session")
    add_common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--ui-dir", type=Path, help="directory with the built UI bundle")
    p.add_argument("--save-path", type=Path, help="where SaveModel writes the edited model")

    p = sub.add_parser("apply", help="run an edit script headlessly")
    add_common(p)
    p.add_argument("--script", required=True, type=Path, help="edit script JSON")
    p.add_argument("--out", type=Path, help="write the edited model here")

    p = sub.add_parser("metrics", help="report metrics for one scope")
    add_common(p, data_required=True)
    p.add_argument("--scope", choices=["global", "selected", "slice"], default="global")
    p.add_argument("--term", help="term for selected/slice scopes")
    p.add_argument("--bins", help="inclusive bin range lo:hi for the selected scope")
    p.add_argument("--level", help="categorical level for the slice scope")

    p = sub.add_parser("validate", help="check a model file (and optionally a dataset)")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--data", type=Path)
    p.add_argument("--label-column", default="label")
    p.add_argument("--lenient", action="store_true")

    p = sub.add_parser("export", help="re-emit a model file in canonical form")
    p.add_argument("--model", required=True, type=Path)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--strip-history", action="store_true")
    p.add_argument("--recenter", action="store_true",
                   help="zero each term's count-weighted mean before writing")

    return parser


def _load(args, *, need_data: bool):
    loaded = load_model(args.model)
    dataset = None
    if getattr(args, "data", None) is not None:
        dataset, skipped = load_dataset(args.data, loaded.model,
                                        label_column=args.label_column,
                                        strict=not args.lenient)
        if skipped:
            print(f"skipped {skipped} unparsable rows", file=sys.stderr)
    elif need_data:
        raise GamEditError("this command requires --data")
    return loaded, dataset


def _cmd_serve(args) -> int:
    loaded, dataset = _load(args, need_data=False)
    session = EditorSession(loaded.model, dataset=dataset, history=loaded.history,
                            threshold=args.threshold)
    try:
        server = make_server(session, host=args.host, port=args.port,
                             ui_dir=args.ui_dir, save_path=args.save_path,
                             quiet=False)
    except PortInUse as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"serving {args.model} on {server.url}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _cmd_apply(args) -> int:
    loaded, dataset = _load(args, need_data=False)
    steps = parse_script(args.script)
    result = run_script(loaded.model, dataset, steps, threshold=args.threshold)
    out = {
        "commits": [{"id": c.id, "message": c.message} for c in result.commits],
        "before": None if result.before is None else triple_to_jsonable(result.before),
        "after": None if result.after is None else triple_to_jsonable(result.after),
    }
    if args.out is not None:
        saved = result.session.save()
        args.out.write_text(saved.file_text, encoding="utf-8")
        out["saved"] = str(args.out)
    print(json.dumps(out, indent=2))
    return 0


def _parse_scope_args(args) -> Scope:
    if args.scope == "global":
        return Scope.global_()
    if args.scope == "selected":
        if not args.term or not args.bins:
            raise GamEditError("selected scope requires --term and --bins lo:hi")
        lo, _, hi = args.bins.partition(":")
        indices = tuple(range(int(lo), int(hi or lo) + 1))
        return Scope.selected(Selection(term_name=args.term, bin_indices=indices))
    if not args.term or args.level is None:
        raise GamEditError("slice scope requires --term and --level")
    return Scope.slice_(args.term, args.level)


def _cmd_metrics(args) -> int:
    loaded, dataset = _load(args, need_data=True)
    session = EditorSession(loaded.model, dataset=dataset, history=loaded.history,
                            threshold=args.threshold)
    report = session.metrics(_parse_scope_args(args))
    print(json.dumps(report_to_jsonable(report.current), indent=2))
    return 0


def _cmd_validate(args) -> int:
    loaded = load_model(args.model)
    n_commits = len(loaded.history.commits) if loaded.history else 0
    print(f"model OK: {loaded.model.feature_count} terms, "
          f"{len(loaded.model.interactions)} interactions, "
          f"{n_commits} history commits")
    if args.data is not None:
        dataset, skipped = load_dataset(args.data, loaded.model,
                                        label_column=args.label_column,
                                        strict=not args.lenient)
        print(f"dataset OK: {len(dataset)} samples"
              + (f", {skipped} rows skipped" if skipped else ""))
    return 0


def _cmd_export(args) -> int:
    loaded = load_model(args.model)
    model = recenter(loaded.model) if args.recenter else loaded.model
    history = None if (args.strip_history or args.recenter) else loaded.history
    args.out.write_text(save_model(model, history), encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


_COMMANDS = {
    "serve": _cmd_serve,
    "apply": _cmd_apply,
    "metrics": _cmd_metrics,
    "validate": _cmd_validate,
    "export": _cmd_export,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except GamEditError as e:
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
