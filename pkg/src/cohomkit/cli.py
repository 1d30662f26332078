"""Command line: ``cohomkit analyze`` and ``cohomkit selftest``.

Exit codes: 0 success, 2 bad input (unreadable model, missing J or omega
block, bad flags), 3 a theorem trap fired (a computed invariant contradicts
a proved relation, which means a bug).
"""

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import ContractViolation, InputError, TheoremViolation
from .modelfile import bundled_names, load_bundled, model_from_dict, model_to_dict, resolve, serialize
from .report import analyze

EXIT_OK, EXIT_INPUT, EXIT_TRAP = 0, 2, 3


def _run_one(job):
    """Worker: ``job`` is (model spec or dict, options).

    Returns ``(status, name, report_text, message)``; ``report_text`` is None
    when no report could be built.
    """
    spec, opts = job
    try:
        mf = model_from_dict(spec, spec.get("name", "<dict>")) if isinstance(spec, dict) \
            else resolve(spec)
    except InputError as exc:
        return "input", str(spec if not isinstance(spec, dict) else spec.get("name")), None, str(exc)
    try:
        rep = analyze(mf, opts.get("complex"), opts.get("symplectic"),
                      window=opts.get("window", 1), seed=opts.get("seed", 0))
    except InputError as exc:
        return "input", mf.name, None, str(exc)
    except (TheoremViolation, ContractViolation) as exc:
        return "trap", mf.name, None, f"{type(exc).__name__}: {exc}"
    text = rep.to_json() if opts.get("format") == "json" else rep.to_text()
    if not rep.ok:
        failed = "; ".join(f"{e.name} ({e.detail})" for e in rep.failures())
        return "trap", mf.name, text, f"failed checks: {failed}"
    return "ok", mf.name, text, ""


def _map(jobs, n_jobs):
    if n_jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            return list(pool.map(_run_one, jobs))
    return [_run_one(j) for j in jobs]


def _default_jobs(count):
    return max(1, min(count, os.cpu_count() or 1))


def cmd_analyze(args, out, err):
    opts = {"complex": True if args.complex else None,
            "symplectic": True if args.symplectic else None,
            "format": args.format, "window": args.window, "seed": args.seed}
    if args.complex and not args.symplectic:
        opts["symplectic"] = False
    if args.symplectic and not args.complex:
        opts["complex"] = False
    jobs = [(m, opts) for m in args.models]
    results = _map(jobs, args.jobs or _default_jobs(len(jobs)))
    code = EXIT_OK
    docs = []
    for status, name, text, msg in results:
        if status == "input":
            err.write(f"error: {msg}\n")
            code = max(code, EXIT_INPUT)
            continue
        if status == "trap":
            err.write(f"theorem trap in {name}: {msg}\n")
            code = EXIT_TRAP
        if text is None:
            continue
        if args.format == "json":
            docs.append(text)
        else:
            out.write(text)
    if docs:
        if len(docs) == 1:
            out.write(docs[0])
        else:
            out.write("[\n" + ",\n".join(d.rstrip("\n") for d in docs) + "\n]\n")
    return code


def _dump_failure(directory, mf_dict, detail):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    stem = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in mf_dict["name"])
    path = directory / f"{stem}.json"
    path.write_text(serialize(model_from_dict(mf_dict)), encoding="utf-8")
    (directory / f"{stem}.failure.txt").write_text(detail + "\n", encoding="utf-8")
    return path


def selftest_models(seed, n_symplectic, n_complex):
    """Bundled models first, then the seeded random family, all as plain dicts."""
    from .randmodels import suite
    bundled = [model_to_dict(load_bundled(name)) for name in bundled_names()]
    rand = [model_to_dict(mf) for mf in suite(seed, n_symplectic, n_complex)]
    return bundled + rand


def cmd_selftest(args, out, err):
    t0 = time.perf_counter()
    try:
        models = selftest_models(args.seed, args.count, args.complex_count)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    opts = {"seed": args.seed, "window": args.window, "format": "json"}
    jobs = [(m, opts) for m in models]
    code = EXIT_OK
    by_name = {m["name"]: m for m in models}
    for status, name, text, msg in _map(jobs, args.jobs or _default_jobs(len(jobs))):
        if status == "ok":
            if args.verbose:
                verdicts = json.loads(text)["verdicts"]
                out.write(f"ok    {name}: {'; '.join(verdicts)}\n")
            continue
        if status == "input":
            err.write(f"error: {msg}\n")
            code = max(code, EXIT_INPUT)
            continue
        path = _dump_failure(args.failures, by_name[name], msg + ("\n\n" + text if text else ""))
        out.write(f"FAIL  {name}: {msg.splitlines()[0][:200]}\n      model written to {path}\n")
        code = EXIT_TRAP
    if code == EXIT_OK:
        out.write(f"selftest: {len(models)} models passed in {time.perf_counter() - t0:.1f}s\n")
    return code


def build_parser():
    p = argparse.ArgumentParser(prog="cohomkit",
                                description="Exact cohomology of nilmanifold and solvmanifold models.")
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("analyze", help="compute tables and run every applicable check")
    a.add_argument("models", nargs="+", help="model file paths or bundled model names")
    a.add_argument("--complex", action="store_true", help="complex-geometric part (needs J)")
    a.add_argument("--symplectic", action="store_true", help="symplectic part (needs omega)")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--window", type=int, default=1, help="strip complex q-window half-width")
    a.add_argument("--seed", type=int, default=0, help="seed for the random inner products")
    a.add_argument("--jobs", type=int, default=0, help="worker processes (default: one per CPU)")
    s = sub.add_parser("selftest", help="bundled models plus a seeded random family")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=50, help="random symplectic models")
    s.add_argument("--complex-count", type=int, default=8, help="random complex models")
    s.add_argument("--window", type=int, default=1)
    s.add_argument("--jobs", type=int, default=0)
    s.add_argument("--failures", default="selftest-failures",
                   help="directory for failing models")
    s.add_argument("-v", "--verbose", action="store_true")
    sub.add_parser("models", help="list bundled models")
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "window", 1) < 1:
        err.write("error: --window must be at least 1\n")
        return EXIT_INPUT
    if args.command == "analyze":
        return cmd_analyze(args, out, err)
    if args.command == "selftest":
        return cmd_selftest(args, out, err)
    for name in bundled_names():
        out.write(name + "\n")
    return EXIT_OK


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
