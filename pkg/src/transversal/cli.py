"""Command-line interface: ``gen``, ``check``, ``solve``, ``oracle`` and ``verify-theorem``.

Reports are ``key: value`` lines in a fixed order:

    report, command, instance, seed, <command-specific fields>, outcome, timing.*

Timing fields come last and are the only fields that vary between identical
runs.  Exit codes: 0 found / pass, 1 none / fail, 2 usage or input error,
3 budget exhausted / no move.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import oracle, rbf
from .constructions import complete_family, hexagon_family, pm_blocks_family, two_blocks_family
from .core import CYCLE_ROLE, MATCHING_ROLE, BipartiteFamily, validate_family, verify_rainbow, witness_lines
from .generators import GenSpec, derive_seed, random_near_miss_family, random_valid_family
from .solver import NO_MOVE, RoleError, Target, check_role, parse_target, solve

MAX_THEOREM_N = 7
EXIT_CODES = {
    "found": 0, "pass": 0,
    "none": 1, "fail": 1, "counterexample": 1,
    "budget_exhausted": 3, NO_MOVE: 3,
}


class UsageError(Exception):
    pass


@dataclass
class Report:
    command: str
    outcome: str
    fields: list[tuple[str, str]] = field(default_factory=list)
    timing: list[tuple[str, str]] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.outcome]

    def items(self) -> list[tuple[str, str]]:
        return ([("report", "rainbow-report 1"), ("command", self.command)] + self.fields
                + [("outcome", self.outcome)] + self.timing)

    def text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.items())

    def json(self) -> str:
        data: dict = {}
        for k, v in self.items():
            if k in data:
                if not isinstance(data[k], list):
                    data[k] = [data[k]]
                data[k].append(v)
            else:
                data[k] = v
        return json.dumps(data, indent=2) + "\n"


def strip_timing(text: str) -> str:
    """Report text without its timing lines, for determinism comparisons."""
    return "".join(line for line in text.splitlines(keepends=True)
                   if not line.startswith(("timing.", '  "timing.')))


def _budget(args) -> oracle.SearchBudget:
    return oracle.SearchBudget(args.budget_nodes, args.time_limit)


def _witness_fields(witness) -> list[tuple[str, str]]:
    out = []
    for line in witness_lines(witness):
        key, _, value = line.partition(" ")
        out.append((f"witness.{key}", value))
    return out


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_gen(args) -> tuple[Report, BipartiteFamily | None]:
    random_flags = [name for name in ("slack", "seed", "near_miss") if getattr(args, name) not in (None, False)]
    if args.construction:
        if random_flags:
            raise UsageError(f"--construction excludes --{random_flags[0].replace('_', '-')}")
        c = args.construction
        if c == "hexagon":
            if args.n not in (None, 3) or args.graphs not in (None, 6):
                raise UsageError("the hexagon family has n = 3 and 6 graphs")
            family = hexagon_family()
        elif args.n is None:
            raise UsageError(f"--construction {c} needs --n")
        elif c == "complete":
            family = complete_family(args.n, args.graphs or 2 * args.n)
        else:
            if args.graphs is not None:
                raise UsageError(f"--construction {c} fixes the graph count")
            family = two_blocks_family(args.n) if c == "two-blocks" else pm_blocks_family(args.n)
        source = f"construction {c}"
    else:
        if args.n is None:
            raise UsageError("gen needs --n or --construction")
        spec = GenSpec(args.n, args.graphs or 2 * args.n, args.slack or 0, args.seed or 0)
        family = random_near_miss_family(spec) if args.near_miss else random_valid_family(spec)
        source = "near-miss" if args.near_miss else "random-valid"
    fields = [("instance", "sha256:" + rbf.digest(family)), ("source", source),
              ("n", str(family.n)), ("graphs", str(family.s))]
    if args.out:
        rbf.write_family(family, args.out)
        fields.append(("out", str(args.out)))
    return Report(args.echo, "pass", fields), family


def cmd_check(args) -> tuple[Report, None]:
    family = rbf.read_family(args.file)
    role = CYCLE_ROLE if args.role == "cycle" else MATCHING_ROLE
    vr = validate_family(family, role)
    fields = [("instance", "sha256:" + rbf.digest(family))]
    fields += [("check", line) for line in vr.lines()]
    return Report(args.echo, "pass" if vr.passed else "fail", fields), None


def _target_of(args, family) -> Target:
    try:
        target = parse_target(args.target, family.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    check_role(family, target)
    return target


def cmd_solve(args) -> tuple[Report, None]:
    family = rbf.read_family(args.file)
    target = _target_of(args, family)
    result = solve(family, target, _budget(args), fallback=not args.no_fallback, seed=args.seed)
    fields = [("instance", "sha256:" + rbf.digest(family)), ("seed", str(args.seed)),
              ("target", str(target)), ("via", result.via or "-"), ("stall", result.stall or "-")]
    fields += [(f"moves.{k}", str(v)) for k, v in sorted(result.stats.items())]
    if result.witness is not None:
        fields += _witness_fields(result.witness)
    return Report(args.echo, result.outcome, fields,
                  [("timing.seconds", f"{result.seconds:.6f}")]), None


def _oracle_run(family, target: Target, budget) -> oracle.SearchResult:
    if target.kind == "pm":
        return oracle.find_rainbow_perfect_matching(family, budget)
    return oracle.find_rainbow_cycle(family, target.length, budget)


def cmd_oracle(args) -> tuple[Report, None]:
    family = rbf.read_family(args.file)
    target = _target_of(args, family)
    t0 = time.perf_counter()
    res = _oracle_run(family, target, _budget(args))
    elapsed = time.perf_counter() - t0
    fields = [("instance", "sha256:" + rbf.digest(family)), ("seed", str(args.seed)),
              ("target", str(target)), ("nodes", str(res.nodes))]
    if res.witness is not None:
        fields += _witness_fields(res.witness)
    return Report(args.echo, res.status, fields, [("timing.seconds", f"{elapsed:.6f}")]), None


def theorem_targets(theorem: int, n: int) -> list[Target]:
    if theorem == 3:
        return [Target("cycle", 2 * n)]
    if theorem == 5:
        return [Target("pm")]
    return [Target("cycle", length) for length in range(4, 2 * n + 1, 2)
            if not (n == 3 and length == 4)]


def trial_seed(master: int, n: int, index: int) -> int:
    """Seed of trial ``index`` at size ``n``: derive_seed(derive_seed(master, n), index)."""
    return derive_seed(derive_seed(master, n), index)


def run_trial(theorem: int, n: int, index: int, master: int, max_nodes: int | None) -> dict:
    seed = trial_seed(master, n, index)
    graphs = n if theorem == 5 else 2 * n
    family = random_valid_family(GenSpec(n, graphs, 0, seed))
    t0 = time.perf_counter()
    outcomes = []
    for target in theorem_targets(theorem, n):
        res = _oracle_run(family, target, oracle.SearchBudget(max_nodes))
        status = res.status
        if res.found and not verify_rainbow(res.witness, family):
            status = "invalid-witness"
        outcomes.append((str(target), status))
    return {"n": n, "index": index, "seed": seed, "outcomes": outcomes,
            "family": rbf.serialize(family), "seconds": time.perf_counter() - t0}


def _run_trial_packed(job):
    return run_trial(*job)


def cmd_verify_theorem(args) -> tuple[Report, None]:
    if not 2 <= args.n_min <= args.n_max:
        raise UsageError("need 2 <= --n-min <= --n-max")
    if args.n_max > MAX_THEOREM_N:
        raise UsageError(f"--n-max is capped at {MAX_THEOREM_N}")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    jobs = [(args.theorem, n, t, args.seed, args.budget_nodes)
            for n in range(args.n_min, args.n_max + 1) for t in range(args.trials)]
    t0 = time.perf_counter()
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_run_trial_packed, jobs, chunksize=4))
    else:
        results = [_run_trial_packed(j) for j in jobs]
    fields = [("seed", str(args.seed)), ("theorem", str(args.theorem)),
              ("n-range", f"{args.n_min}..{args.n_max}"), ("trials", str(args.trials))]
    passed = failed = exhausted = 0
    counterexamples = []
    for r in results:
        statuses = {s for _, s in r["outcomes"]}
        if statuses <= {"found"}:
            passed += 1
            verdict = "pass"
        elif "budget_exhausted" in statuses and statuses <= {"found", "budget_exhausted"}:
            exhausted += 1
            verdict = "budget_exhausted"
        else:
            failed += 1
            verdict = "counterexample"
            counterexamples.append(r)
        detail = " ".join(f"{t}={s}" for t, s in r["outcomes"])
        fields.append(("trial", f"n={r['n']} index={r['index']} seed={r['seed']} {verdict} {detail}"))
    fields += [("passed", str(passed)), ("counterexamples", str(failed)),
               ("budget-exhausted", str(exhausted))]
    for r in counterexamples:
        for line in r["family"].splitlines():
            fields.append((f"counterexample.n{r['n']}.i{r['index']}", line))
    outcome = "counterexample" if failed else ("budget_exhausted" if exhausted else "pass")
    timing = [("timing.seconds", f"{time.perf_counter() - t0:.6f}")]
    return Report(args.echo, outcome, fields, timing), None


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="transversal", description="Rainbow structures in graph families.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def output_flags(p):
        p.add_argument("--report", type=Path, help="also write the report to FILE")
        p.add_argument("--json", action="store_true", help="JSON rendering of the report")

    g = sub.add_parser("gen", help="write a family file")
    g.add_argument("--n", type=int)
    g.add_argument("--graphs", type=int)
    g.add_argument("--slack", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--near-miss", action="store_true")
    g.add_argument("--construction", choices=["complete", "two-blocks", "pm-blocks", "hexagon"])
    g.add_argument("--out", type=Path)
    output_flags(g)

    c = sub.add_parser("check", help="validate the degree conditions")
    c.add_argument("file", type=Path)
    c.add_argument("--role", choices=["cycle", "matching"], default="cycle")
    output_flags(c)

    for name, help_text in (("solve", "proof-guided moves with oracle fallback"),
                            ("oracle", "exact search")):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("file", type=Path)
        s.add_argument("--target", default="ham", help="ham, cycle:L or pm")
        s.add_argument("--budget-nodes", type=int)
        s.add_argument("--time-limit", type=float)
        s.add_argument("--seed", type=int, default=0)
        if name == "solve":
            s.add_argument("--no-fallback", action="store_true")
        output_flags(s)

    v = sub.add_parser("verify-theorem", help="oracle sweep over seeded valid families")
    v.add_argument("--theorem", type=int, choices=[3, 4, 5], required=True)
    v.add_argument("--n-min", type=int, default=2)
    v.add_argument("--n-max", type=int, default=5)
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--budget-nodes", type=int)
    v.add_argument("--jobs", type=int, default=1)
    output_flags(v)
    return parser


COMMANDS = {"gen": cmd_gen, "check": cmd_check, "solve": cmd_solve,
            "oracle": cmd_oracle, "verify-theorem": cmd_verify_theorem}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        args.echo = " ".join(["transversal"] + argv)
        report, _ = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except rbf.RbfError as exc:
        print(f"parse error: {getattr(args, 'file', '')}: {exc}", file=sys.stderr)
        return 2
    except RoleError as exc:
        print(f"role error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rendered = report.json() if args.json else report.text()
    sys.stdout.write(rendered)
    if args.report:
        Path(args.report).write_text(rendered, encoding="ascii")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
