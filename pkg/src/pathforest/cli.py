"""Command-line front end: reproducible runs, checks, oracles, certificate."""

from __future__ import annotations

import concurrent.futures
import json
import os
import sys

import click

from . import assembly, engine, invariants, oracle
from .colouring import (Colour, RestrictedColouring, generate,
                        restrict_to_prefix)
from .errors import (ConsistencyError, FormatError, HorizonError,
                     InvariantViolation, ParameterError)

DENSITY_EPS_DEFAULT = 0.1

_USAGE_ERRORS = (ParameterError, FormatError, HorizonError)


def _seed_from_env(seed: int) -> int:
    """PF_SEED, when set, overrides whatever was passed on the command line."""
    env = os.environ.get("PF_SEED")
    if env is None:
        return seed
    try:
        return int(env)
    except ValueError:
        raise ParameterError(f"PF_SEED must be an integer, got {env!r}")


def _load_colouring(colouring_file, gen_kind, seed, horizon, p, q, window):
    if (colouring_file is None) == (gen_kind is None):
        raise ParameterError(
            "exactly one colouring source required: --colouring or --gen")
    if colouring_file is not None:
        return RestrictedColouring.load(colouring_file)
    return generate(gen_kind, seed, horizon, p=p, q=q, window=window)


def _summarize(trace, eps):
    """Sup of max{cR,cB}/t, its late-half variant, first threshold hit."""
    best = 0.0
    best_late = 0.0
    first_hit = None
    target = 0.82019 - eps
    half = len(trace) // 2
    for row in trace:
        ratio = max(row.c_R, row.c_B) / row.t
        best = max(best, ratio)
        if row.t > half:
            best_late = max(best_late, ratio)
        if first_hit is None and ratio >= target:
            first_hit = row.t
    return {"sup_ratio": best, "sup_ratio_late_half": best_late,
            "first_t_at_target": first_hit, "target": target}


def _echo_json(data) -> None:
    click.echo(json.dumps(data, sort_keys=True))


def _fail_usage(exc) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(2)


def _fail_property(exc) -> None:
    click.echo(f"FAIL: {exc}", err=True)
    sys.exit(1)


@click.group()
def main() -> None:
    """Online monochromatic path-forest construction and verification."""


_shared_source = [
    click.option("--colouring", "colouring_file", type=click.Path(exists=True),
                 default=None, help="Colouring JSON file."),
    click.option("--gen", "gen_kind",
                 type=click.Choice(["random", "block", "all_one_colour"]),
                 default=None, help="Generate the colouring instead."),
    click.option("--seed", type=int, default=0, show_default=True,
                 help="Generator seed (PF_SEED env var overrides)."),
    click.option("--horizon", type=int, default=3000, show_default=True),
    click.option("--p", type=float, default=0.5, show_default=True,
                 help="Red-class probability for --gen random."),
    click.option("--q", type=float, default=0.1, show_default=True,
                 help="Exception probability for --gen random."),
    click.option("--window", type=int, default=32, show_default=True,
                 help="Forward exception window for --gen random."),
]


def _with_source(fn):
    for opt in reversed(_shared_source):
        fn = opt(fn)
    return fn


def _run_one(payload):
    """Worker for --jobs: one seeded run, optionally written to disk."""
    (gen_kind, seed, horizon, p, q, window, ell, rounds, checks,
     trace_path, csv_path, eps) = payload
    colouring = generate(gen_kind, seed, horizon, p=p, q=q, window=window)
    trace, _state = engine.run(colouring, ell, rounds, checks=checks)
    if trace_path:
        engine.write_trace_jsonl(trace_path, trace)
    if csv_path:
        engine.write_trace_csv(csv_path, trace)
    summary = _summarize(trace, eps)
    summary["seed"] = seed
    return summary


@main.command("run")
@_with_source
@click.option("--ell", type=int, required=True, help="Even reserve size.")
@click.option("--rounds", type=int, required=True)
@click.option("--checks", type=click.Choice(["none", "full"]), default="none",
              show_default=True)
@click.option("--trace", "trace_path", type=click.Path(), default=None,
              help="Write the JSONL trace here.")
@click.option("--csv", "csv_path", type=click.Path(), default=None,
              help="Write a CSV mirror of the trace here.")
@click.option("--eps", type=float, default=DENSITY_EPS_DEFAULT,
              show_default=True, help="Slack for the density target line.")
@click.option("--progress", is_flag=True, help="Print every 100 rounds.")
@click.option("--repeat", type=int, default=1, show_default=True,
              help="Run this many consecutive seeds (generators only).")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Parallel workers for --repeat.")
def cmd_run(colouring_file, gen_kind, seed, horizon, p, q, window, ell,
            rounds, checks, trace_path, csv_path, eps, progress, repeat, jobs):
    """Run the engine and write its trace."""
    try:
        seed = _seed_from_env(seed)
        if repeat > 1:
            if gen_kind is None:
                raise ParameterError("--repeat needs --gen")
            payloads = []
            for s in range(seed, seed + repeat):
                tp = f"{trace_path}.{s}" if trace_path else None
                cp = f"{csv_path}.{s}" if csv_path else None
                payloads.append((gen_kind, s, horizon, p, q, window, ell,
                                 rounds, checks, tp, cp, eps))
            if jobs > 1:
                with concurrent.futures.ProcessPoolExecutor(jobs) as pool:
                    for summary in pool.map(_run_one, payloads):
                        _echo_json(summary)
            else:
                for payload in payloads:
                    _echo_json(_run_one(payload))
            return
        colouring = _load_colouring(colouring_file, gen_kind, seed, horizon,
                                    p, q, window)
        reporter = (lambda t: click.echo(f"round {t}", err=True)) if progress else None
        trace, _state = engine.run(colouring, ell, rounds, checks=checks,
                                   progress=reporter)
        if trace_path:
            engine.write_trace_jsonl(trace_path, trace)
        if csv_path:
            engine.write_trace_csv(csv_path, trace)
        _echo_json(_summarize(trace, eps))
    except InvariantViolation as exc:
        _fail_property(exc)
    except ConsistencyError as exc:
        _fail_property(exc)
    except _USAGE_ERRORS as exc:
        _fail_usage(exc)


@main.command("check")
@_with_source
@click.option("--trace", "trace_path", type=click.Path(exists=True),
              default=None, help="Check a stored trace instead of running.")
@click.option("--ell", type=int, required=True)
@click.option("--rounds", type=int, default=None,
              help="Run length for live mode.")
@click.option("--monitors/--no-monitors", default=True, show_default=True,
              help="Also report the escape-lemma monitors (live mode).")
@click.option("--eps", type=float, default=0.25, show_default=True,
              help="Density slack for the monitors.")
def cmd_check(colouring_file, gen_kind, seed, horizon, p, q, window,
              trace_path, ell, rounds, monitors, eps):
    """Re-verify invariants for a stored trace or a live run."""
    try:
        seed = _seed_from_env(seed)
        if trace_path is not None:
            rows = engine.read_trace_jsonl(trace_path)
            if not rows:
                raise ParameterError(f"trace {trace_path} is empty")
            failures = []
            prev = None
            for row in rows:
                failures += [r for r in invariants.check_row_shape(row, prev)
                             if not r.passed]
                failures += [r for r in invariants.check_row_facts(row, ell)
                             if not r.passed]
                prev = row
            acc, fire = invariants.check_rho_accounting(rows, ell)
            failures += [r for r in acc if not r.passed]
            _echo_json({"rows": len(rows), "failures": len(failures),
                        "fire_counts": dict(fire)})
            if failures:
                worst = failures[0]
                _fail_property(f"{worst.property_id} at round "
                               f"{worst.round_no}: {worst.lhs} vs {worst.rhs}")
            return
        if rounds is None:
            raise ParameterError("live mode needs --rounds")
        colouring = _load_colouring(colouring_file, gen_kind, seed, horizon,
                                    p, q, window)
        trace, state = engine.run(colouring, ell, rounds, checks="full")
        out = {"rows": len(trace), "failures": 0}
        if monitors:
            report = invariants.monitor_escape_lemmas(
                trace, state.spare_events, ell, eps)
            out["monitors"] = {"checked": report.checked,
                               "resolved": report.resolved,
                               "inconclusive": report.inconclusive}
        _echo_json(out)
    except InvariantViolation as exc:
        _fail_property(exc)
    except ConsistencyError as exc:
        _fail_property(exc)
    except _USAGE_ERRORS as exc:
        _fail_usage(exc)


@main.command("oracle")
@click.option("--gg", "mode", flag_value="gg",
              help="Longest-path lower bound over colourings of K_n.")
@click.option("--compare", "mode", flag_value="compare",
              help="Engine coverage vs the exhaustive coverage oracle.")
@click.option("--n", type=int, default=5, show_default=True)
@click.option("--exhaustive", is_flag=True)
@click.option("--samples", type=int, default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--seeds", type=int, default=5, show_default=True,
              help="Seed count for --compare.")
@click.option("--ell", type=int, default=8, show_default=True)
@click.option("--rounds", type=int, default=12, show_default=True)
def cmd_oracle(mode, n, exhaustive, samples, seed, seeds, ell, rounds):
    """Exact small-instance ground truth."""
    try:
        seed = _seed_from_env(seed)
        if mode == "gg":
            need = -(-2 * n // 3)

            def long_enough(c):
                return max(oracle.longest_mono_path(c, Colour.RED).best,
                           oracle.longest_mono_path(c, Colour.BLUE).best) >= need

            counterexample = oracle.enumerate_small(
                n, long_enough, samples=None if exhaustive else samples,
                seed=seed)
            if counterexample is not None:
                click.echo(json.dumps(counterexample.to_json_dict()))
                _fail_property(f"colouring of K_{n} below {need} vertices")
            mode_name = "exhaustive" if exhaustive else f"{samples} samples"
            click.echo(f"no counterexample (n={n}, bound {need}, {mode_name})")
            return
        if mode == "compare":
            if rounds > oracle.MAX_COVER_PREFIX:
                raise ParameterError(
                    f"--rounds capped at {oracle.MAX_COVER_PREFIX} in compare mode")
            for s in range(seed, seed + seeds):
                colouring = generate("random", s, horizon=rounds * 4,
                                     q=0.3, window=2)
                trace, _state = engine.run(colouring, ell, rounds)
                explicit = restrict_to_prefix(colouring, rounds + 2)
                for row in trace:
                    for colour, c_val in ((Colour.RED, row.c_R),
                                          (Colour.BLUE, row.c_B)):
                        cap = oracle.max_pathforest_coverage(
                            explicit, colouring.class_of, colour, row.t)
                        status = "<=" if c_val <= cap.best else ">"
                        click.echo(f"seed {s} t={row.t} {colour}: engine "
                                   f"{c_val} {status} oracle {cap.best}")
                        if c_val > cap.best:
                            _fail_property("engine exceeded exhaustive bound")
            return
        raise ParameterError("pick a mode: --gg or --compare")
    except _USAGE_ERRORS as exc:
        _fail_usage(exc)


@main.command("certificate")
@click.option("--eps", "eps_values", type=float, multiple=True,
              help="Repeatable; defaults to 0.1.")
def cmd_certificate(eps_values):
    """Verify the numeric facts behind the density constant."""
    eps_values = eps_values or (0.1,)
    try:
        for eps in eps_values:
            report = invariants.verify_certificate(eps)
            _echo_json({"eps": eps, "alpha": report.alpha,
                        "threshold": report.threshold, "yTA": report.yTA,
                        "residuals": report.residuals})
    except InvariantViolation as exc:
        _fail_property(exc)
    except _USAGE_ERRORS as exc:
        _fail_usage(exc)


@main.command("gen")
@click.option("--kind", type=click.Choice(["random", "block", "all_one_colour"]),
              required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--horizon", type=int, default=3000, show_default=True)
@click.option("--p", type=float, default=0.5, show_default=True)
@click.option("--q", type=float, default=0.1, show_default=True)
@click.option("--window", type=int, default=32, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def cmd_gen(kind, seed, horizon, p, q, window, out):
    """Write a generated colouring to a JSON file."""
    try:
        seed = _seed_from_env(seed)
        colouring = generate(kind, seed, horizon, p=p, q=q, window=window)
        colouring.save(out)
        click.echo(f"wrote {out} (horizon {horizon}, kind {kind}, seed {seed})")
    except _USAGE_ERRORS as exc:
        _fail_usage(exc)


@main.command("assemble")
@_with_source
@click.option("--ell", type=int, required=True)
@click.option("--iterations", type=int, default=3, show_default=True)
@click.option("--span", "spans", type=int, multiple=True,
              help="Suffix run length per iteration (repeatable).")
@click.option("--out", type=click.Path(), default=None)
def cmd_assemble(colouring_file, gen_kind, seed, horizon, p, q, window, ell,
                 iterations, spans, out):
    """Stitch engine forests into one monochromatic path."""
    try:
        seed = _seed_from_env(seed)
        colouring = _load_colouring(colouring_file, gen_kind, seed, horizon,
                                    p, q, window)
        spans = list(spans) or [120] * iterations
        result = assembly.assemble(colouring, ell, iterations, spans)
        data = result.to_json_dict()
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                json.dump(data, fh, sort_keys=True)
        _echo_json({"colour": data["colour"], "length": len(data["path"]),
                    "checkpoints": data["checkpoints"],
                    "incomplete": data["incomplete"]})
    except ConsistencyError as exc:
        _fail_property(exc)
    except _USAGE_ERRORS as exc:
        _fail_usage(exc)


if __name__ == "__main__":
    main()
