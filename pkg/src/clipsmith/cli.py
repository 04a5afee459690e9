"""clipsmith command line.

Exit codes: 0 ok, 1 usage, 2 input parse error, 3 empty plan / alignment failure,
4 adapter failure, 5 fetch failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import errors
from .aligner import align_global, align_monotone
from .fetcher import FetchConfig, fetch_transcript
from .pipeline import SummaryParams, summarize_multi_concat, summarize_multi_dnc, summarize_single
from .render import emit_cheatsheet, emit_edl, emit_ffmpeg_plan, emit_paragraph, execute_plan, parse_edl
from .segmenter import PunctuationPolicy, split_sentences
from .summarizer import ENGINES, EngineParams
from .tokens import load_stopwords
from .transcript_io import FormatKind, detect_format, parse

log = logging.getLogger("clipsmith")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_EMPTY, EXIT_ADAPTER, EXIT_FETCH = range(6)
SUBCOMMANDS = ("summarize", "multi", "cheatsheet", "paragraph", "align", "plan", "fetch")
_FORMATS = {"json": FormatKind.YOUTUBE_JSON, "srt": FormatKind.SRT, "vtt": FormatKind.VTT}


class UsageError(Exception):
    def __init__(self, message, parser=None):
        super().__init__(message)
        self.parser = parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, self)


def _usage_for(parser: _Parser, argv: list[str], exc: UsageError) -> _Parser:
    if exc.parser is not None:
        return exc.parser
    command = next((a for a in argv if a in SUBCOMMANDS), None)
    return parser._subparsers._group_actions[0].choices[command] if command else parser


def _ratio(text: str) -> float:
    value = float(text)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError("ratio must be in (0, 1]")
    return value


def _positive(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def _nonneg(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _unit(text: str) -> float:
    value = float(text)
    if not 0 <= value <= 1:
        raise argparse.ArgumentTypeError("must be in [0, 1]")
    return value


def _summary_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("inputs", nargs="*", metavar="TRANSCRIPT", help="transcript files (json, srt, vtt)")
    p.add_argument("--input", action="append", default=[], metavar="PATH", help="transcript file; repeatable")
    p.add_argument("--format", choices=["auto", "json", "srt", "vtt"], default="auto")
    p.add_argument("--ratio", type=_ratio, default=None,
                   help="fraction of sentences to keep, applied after --filter-questions (default 0.2)")
    p.add_argument("--budget-seconds", type=_positive, default=None,
                   help="summary length budget; wins over the ratio-derived budget")
    p.add_argument("--engine", choices=ENGINES, default="textrank")
    p.add_argument("--strategy", choices=["concat", "dnc"], default="dnc", help="multi-video strategy")
    p.add_argument("--min-importance", type=_unit, default=0.0)
    p.add_argument("--max-clip-seconds", type=_positive, default=None)
    p.add_argument("--merge-gap", type=_nonneg, default=1.0)
    p.add_argument("--padding", type=_nonneg, default=0.25)
    p.add_argument("--filter-questions", action="store_true", help="drop sentences ending in '?'")
    p.add_argument("--punct", default="heuristic", metavar="{none|heuristic|cmd:COMMAND}")
    p.add_argument("--abstractive-cmd", default=None, metavar="COMMAND")
    p.add_argument("--objective", choices=["importance", "paper"], default="importance")
    p.add_argument("--lambda", dest="lam", type=_nonneg, default=1.0)
    p.add_argument("--stopwords", default=None, metavar="PATH", help="stop-word list, one per line")
    p.add_argument("--cache-dir", default=None, metavar="PATH")
    p.add_argument("--reencode", action="store_true", help="frame-accurate cuts (libx264/aac)")
    p.add_argument("--execute", action="store_true", help="run the ffmpeg plan after writing it")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None, metavar="PATH", help="key=value defaults; flags override")
    p.add_argument("--output-dir", default="out", metavar="PATH")
    p.add_argument("--stdout", action="store_true", help="write the primary output to standard output")


def build_parser() -> _Parser:
    parser = _Parser(prog="clipsmith", description="Summarize long videos into a short clip plan via their transcripts.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)
    for name, help_text in [
        ("summarize", "summarize one video"),
        ("multi", "summarize several videos into one"),
        ("cheatsheet", "write only the bullet cheat-sheet"),
        ("paragraph", "write only the summary paragraph"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _summary_options(p)
        _common(p)

    p = sub.add_parser("align", help="align summary sentences to transcript timestamps")
    p.add_argument("inputs", nargs="*", metavar="TRANSCRIPT")
    p.add_argument("--input", action="append", default=[], metavar="PATH")
    p.add_argument("--format", choices=["auto", "json", "srt", "vtt"], default="auto")
    p.add_argument("--summary", required=True, metavar="PATH", help="summary text file")
    p.add_argument("--method", choices=["monotone", "global"], default="monotone")
    p.add_argument("--punct", default="heuristic", metavar="{none|heuristic|cmd:COMMAND}")
    _common(p)

    p = sub.add_parser("plan", help="turn an EDL into an ffmpeg script and concat list")
    p.add_argument("--edl", required=True, metavar="PATH")
    p.add_argument("--reencode", action="store_true")
    p.add_argument("--execute", action="store_true")
    _common(p)

    p = sub.add_parser("fetch", help="download transcripts from a transcript service")
    p.add_argument("video_ids", nargs="+", metavar="VIDEO_ID")
    p.add_argument("--endpoint", default=None, metavar="URL")
    p.add_argument("--offline-dir", default=None, metavar="PATH")
    p.add_argument("--retries", type=int, default=3)
    p.add_argument("--timeout", type=_positive, default=10.0)
    _common(p)
    return parser


def _apply_config(parser: _Parser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    command = next((a for a in argv if a in SUBCOMMANDS), None)
    if command is None:
        return
    subparser = parser._subparsers._group_actions[0].choices[command]
    actions = {a.dest: a for a in subparser._actions}
    try:
        lines = Path(known.config).read_text("utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from None
    defaults = {}
    for n, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        dest = key.strip().lstrip("-").replace("-", "_")
        dest = "lam" if dest == "lambda" else dest
        if not sep or dest not in actions or dest in ("help", "config"):
            raise UsageError(f"{known.config}:{n}: unknown setting {key.strip()!r}")
        action, value = actions[dest], value.strip()
        if isinstance(action, argparse._StoreTrueAction):
            defaults[dest] = value.lower() in ("1", "true", "yes", "on")
        elif isinstance(action, argparse._AppendAction):
            defaults[dest] = value.split()
        else:
            try:
                defaults[dest] = action.type(value) if action.type else value
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise UsageError(f"{known.config}:{n}: {exc}") from None
    subparser.set_defaults(**defaults)


def _punctuation(spec: str) -> PunctuationPolicy:
    if spec == "none":
        return PunctuationPolicy("passthrough")
    if spec == "heuristic":
        return PunctuationPolicy("heuristic")
    if spec.startswith("cmd:") and spec[4:].strip():
        return PunctuationPolicy("external", external_command=spec[4:].strip())
    raise UsageError(f"--punct must be none, heuristic or cmd:<command>, got {spec!r}")


def _input_paths(args) -> list[str]:
    paths = list(args.input) + list(args.inputs)
    if not paths:
        raise UsageError("no input transcript given (use --input PATH)")
    return paths


def _load(paths: list[str], fmt: str):
    transcripts = []
    media = {}
    for path in paths:
        video_id = Path(path).stem
        if video_id in media:
            raise UsageError(f"two inputs share the video id {video_id!r}")
        try:
            raw = Path(path).read_bytes()
        except OSError as exc:
            raise errors.ParseError(path, f"cannot read: {exc.strerror or exc}") from None
        kind = detect_format(raw) if fmt == "auto" else _FORMATS[fmt]
        if kind is FormatKind.UNKNOWN:
            raise errors.ParseError(path, "unrecognized transcript format")
        try:
            transcripts.append(parse(raw, kind, video_id))
        except errors.ParseError as exc:
            raise errors.ParseError(f"{path}: {exc.location}", exc.reason) from None
        media[video_id] = str(Path(path).with_suffix(".mp4"))
    return transcripts, media


def _params(args) -> SummaryParams:
    engine_params = EngineParams()
    if args.stopwords:
        try:
            engine_params = EngineParams(stopwords=load_stopwords(Path(args.stopwords).read_text("utf-8")))
        except OSError as exc:
            raise UsageError(f"cannot read stop-word list: {exc}") from None
    ratio = args.ratio
    if ratio is None and args.budget_seconds is None:
        ratio = 0.2
    return SummaryParams(
        ratio=ratio,
        budget_seconds=args.budget_seconds,
        engine=args.engine,
        min_importance=args.min_importance,
        max_clip_seconds=args.max_clip_seconds,
        merge_gap=args.merge_gap,
        padding=args.padding,
        filter_questions=args.filter_questions,
        abstractive_adapter=args.abstractive_cmd,
        punctuation=_punctuation(args.punct),
        objective_mode=args.objective,
        lam=args.lam,
        engine_params=engine_params,
        cache_dir=Path(args.cache_dir) if args.cache_dir else None,
    )


def _write(outdir: Path, files: dict[str, str | bytes]) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    for name, data in files.items():
        target = outdir / name
        if isinstance(data, bytes):
            target.write_bytes(data)
        else:
            target.write_text(data, "utf-8")


def _summarize(args):
    transcripts, media = _load(_input_paths(args), args.format)
    params = _params(args)
    if args.command == "multi" and len(transcripts) < 2:
        raise UsageError("multi needs at least two transcripts")
    if args.command == "summarize" and len(transcripts) != 1:
        raise UsageError("summarize takes exactly one transcript; use multi for several")
    if len(transcripts) == 1:
        bundle = summarize_single(transcripts[0], params)
    elif args.strategy == "concat":
        bundle = summarize_multi_concat(transcripts, params)
    else:
        bundle = summarize_multi_dnc(transcripts, params)
    if bundle.mode != "single":
        log.info("%s: final abstractive ratio %.2f", bundle.mode, bundle.stats["abstractive_ratio"])
    return bundle, media


def _cmd_summary(args) -> int:
    bundle, media = _summarize(args)
    outdir = Path(args.output_dir)
    edl = emit_edl(bundle.plan, bundle.budget_seconds, media)
    script, listing = emit_ffmpeg_plan(bundle.plan, media, str(outdir), args.reencode)
    files = {
        "edl.json": edl,
        "plan.sh": script,
        "concat.txt": listing,
        "cheatsheet.md": emit_cheatsheet(bundle),
        "paragraph.txt": emit_paragraph(bundle),
    }
    if args.command == "cheatsheet":
        files = {"cheatsheet.md": files["cheatsheet.md"]}
    elif args.command == "paragraph":
        files = {"paragraph.txt": files["paragraph.txt"]}
    if args.stdout:
        data = next(iter(files.values()))
        sys.stdout.write(data.decode("utf-8") if isinstance(data, bytes) else data)
    else:
        _write(outdir, files)
        log.info("wrote %s to %s", ", ".join(files), outdir)
    if getattr(args, "execute", False) and args.command in ("summarize", "multi"):
        execute_plan(script, listing, outdir)
    return EXIT_OK


def _cmd_align(args) -> int:
    transcripts, _ = _load(_input_paths(args), args.format)
    try:
        summary_text = Path(args.summary).read_text("utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read summary: {exc}") from None
    from .segmenter import restore_punctuation, segment_sentences

    policy = _punctuation(args.punct)
    originals = [(t.video_id, segment_sentences(restore_punctuation(t, policy))) for t in transcripts]
    summary = split_sentences(summary_text)
    if args.method == "monotone":
        if len(originals) != 1:
            raise UsageError("monotone alignment takes exactly one transcript")
        alignments = align_monotone(summary, originals[0][1])
    else:
        alignments = align_global(summary, originals)
    rows = [
        {"summary_index": a.summary_index, "video_id": a.video_id, "original_index": a.original_index,
         "similarity": round(a.similarity, 6), "start": a.start, "end": a.end}
        for a in alignments
    ]
    text = json.dumps(rows, ensure_ascii=False, indent=1) + "\n"
    if args.stdout:
        sys.stdout.write(text)
    else:
        _write(Path(args.output_dir), {"alignments.json": text})
    return EXIT_OK


def _cmd_plan(args) -> int:
    try:
        plan, _ = parse_edl(Path(args.edl).read_bytes())
    except OSError as exc:
        raise UsageError(f"cannot read EDL: {exc}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise errors.ParseError(args.edl, f"invalid EDL: {exc}") from None
    inputs = {c.video_id: c.video_id for c in plan.clips}
    script, listing = emit_ffmpeg_plan(plan, inputs, args.output_dir, args.reencode)
    if args.stdout:
        sys.stdout.write(script)
    else:
        _write(Path(args.output_dir), {"plan.sh": script, "concat.txt": listing})
    if args.execute:
        execute_plan(script, listing, args.output_dir)
    return EXIT_OK


def _cmd_fetch(args) -> int:
    try:
        cfg = FetchConfig(args.endpoint, args.timeout, args.retries,
                          Path(args.offline_dir) if args.offline_dir else None)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for video_id in args.video_ids:
        try:
            raw = fetch_transcript(video_id, cfg)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.stdout:
            sys.stdout.write(raw.decode("utf-8", errors="replace"))
        else:
            _write(Path(args.output_dir), {f"{video_id}.json": raw})
    return EXIT_OK


_DISPATCH = {
    "summarize": _cmd_summary,
    "multi": _cmd_summary,
    "cheatsheet": _cmd_summary,
    "paragraph": _cmd_summary,
    "align": _cmd_align,
    "plan": _cmd_plan,
    "fetch": _cmd_fetch,
}


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return _DISPATCH[args.command](args)
    except UsageError as exc:
        _usage_for(parser, argv, exc).print_usage(sys.stderr)
        print(f"clipsmith: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except errors.ParseError as exc:
        print(f"clipsmith: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (errors.EmptyPlan, errors.EmptyTranscript, errors.NoContent,
            errors.AlignmentMiss, errors.DegenerateMatch) as exc:
        print(f"clipsmith: nothing to cut: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except errors.AdapterFailed as exc:
        print(f"clipsmith: {exc}", file=sys.stderr)
        return EXIT_ADAPTER
    except (errors.FetchError, errors.NotFound) as exc:
        print(f"clipsmith: fetch failed: {exc}", file=sys.stderr)
        return EXIT_FETCH
    except errors.MissingInput as exc:
        print(f"clipsmith: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"clipsmith: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s", stream=sys.stderr)
    sys.exit(run())


if __name__ == "__main__":
    main()
