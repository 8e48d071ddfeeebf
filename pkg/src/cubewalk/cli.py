"""Command-line surface: code generation, map checking, mixing, streaming, tests.

Every subcommand is deterministic given its flags; raw bytes only go to
``--out`` or, explicitly, ``--binary-stdout``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import cubefunc, graycode, markov, oracle, prng, report, stats


def _profile_or_table(args) -> tuple[cubefunc.BooleanMap, int | None]:
    """Resolve the map from --profile/--table; returns (map, profile b or None)."""
    if getattr(args, "profile", None):
        cfg = prng.paper_profile(args.profile)
        return cfg.f, cfg.b
    return cubefunc.parse_function_table(args.table), None


def _cmd_gray_gen(args) -> int:
    count = 0
    for seq, tc, cls in graycode.generate_balanced(
        args.n, args.limit, totally_only=args.totally_balanced, jobs=args.jobs
    ):
        if args.json:
            print(
                json.dumps(
                    {"sequence": list(seq.items), "tc": list(tc.values()), "class": cls.value}
                )
            )
        else:
            print(seq)
        count += 1
    if count == 0:
        print("no candidates found", file=sys.stderr)
    return 0


def _cmd_gray_count(args) -> int:
    total = graycode.count_all_decompositions(args.n)
    table_variant = graycode.count_all_decompositions(args.n, include_l2=False)
    fixed = graycode.count_fixed_l_decompositions(args.n)
    if args.json:
        print(
            json.dumps(
                {
                    "n": args.n,
                    "l": graycode.choose_l(args.n),
                    "all_l": total,
                    "all_l_excluding_l2": table_variant,
                    "fixed_l": fixed,
                }
            )
        )
    else:
        print(f"n={args.n} l={graycode.choose_l(args.n)}")
        print(f"decompositions over all even l: {total}")
        print(f"  excluding the degenerate l=2 term: {table_variant}")
        print(f"decompositions at the chosen l: {fixed}")
    return 0


def _cmd_func_build(args) -> int:
    if args.inline:
        seq = graycode.parse_transition_line(args.inline)
        code = graycode.from_transitions(seq, 0)
    else:
        text = Path(args.code).read_text()
        line = next((ln for ln in text.splitlines() if ln.strip()), "")
        code = graycode.parse_codeword_line(line)
    f = cubefunc.remove_cycle(cubefunc.gray_to_cycle(code))
    print(cubefunc.format_function_table(f))
    return 0


def _cmd_func_check(args) -> int:
    f, _ = _profile_or_table(args)
    graph = cubefunc.build_iteration_graph(f)
    ds = markov.is_doubly_stochastic(markov.markov_of(graph))
    sc = cubefunc.is_strongly_connected(graph)
    try:
        factor = cubefunc.recover_removed_permutation(f)
        cycles = factor.cycles
    except ValueError as exc:
        factor, cycles = None, None
        structure = f"not cube-minus-factor shaped ({exc})"
    balance = None
    if factor is not None:
        lengths = ",".join(str(len(c)) for c in cycles)
        if factor.is_hamiltonian:
            structure = f"single {len(cycles[0])}-cycle"
            code = graycode.GrayCode(f.n, cycles[0])
            tc = graycode.transition_count(graycode.to_transitions(code))
            balance = (tc, graycode.classify_balance(tc))
        else:
            structure = f"{len(cycles)} cycles (lengths {lengths})"
    if args.json:
        doc = {
            "doubly_stochastic": ds,
            "strongly_connected": sc.connected,
            "removed_structure": structure,
        }
        if sc.witness:
            doc["witness"] = list(sc.witness)
        if balance:
            doc["tc"] = list(balance[0].values())
            doc["balance"] = balance[1].value
        print(json.dumps(doc))
    else:
        print(f"doubly stochastic: {'yes' if ds else 'no'}")
        suffix = "" if sc.connected else f" (witness: {sc.witness[1]} unreachable from {sc.witness[0]})"
        print(f"strongly connected: {'yes' if sc.connected else 'no'}{suffix}")
        print(f"removed structure: {structure}")
        if balance:
            print(f"gray code balance: {balance[1].value} TC={balance[0].values()}")
    return 0


def _cmd_mix(args) -> int:
    f, ref_b = _profile_or_table(args)
    m = markov.markov_of(cubefunc.build_iteration_graph(f))
    rep = markov.mixing_time(m, args.epsilon, cap=args.cap)
    sweep = markov.epsilon_sweep(m, cap=args.cap) if args.sweep else None
    if args.json:
        doc = rep.to_dict()
        if ref_b is not None:
            doc["reference_b"] = ref_b
        if sweep is not None:
            doc["sweep"] = [{"epsilon": e, "t": t} for e, t in sweep]
        print(json.dumps(doc))
    else:
        if ref_b is not None:
            print(f"reference b: {ref_b}")
        print(rep.to_text())
        if sweep is not None:
            print("epsilon sweep:")
            for eps, t in sweep:
                print(f"  epsilon={eps:g} t={'-' if t is None else t}")
    if args.out:
        paths = report.write_mixing_report(rep, args.out, reference_b=ref_b)
        written = list(paths)
        if sweep is not None:
            written += list(report.write_sweep_report(sweep, args.out, reference_b=ref_b))
        for p in written:
            print(f"wrote {p}", file=sys.stderr)
    return 0


def _cmd_rand(args) -> int:
    if args.profile:
        cfg = prng.paper_profile(args.profile, seed_x=args.seed_x, seed_s=args.seed_s)
        if args.b is not None:
            cfg = prng.GeneratorConfig(cfg.f, args.b, args.seed_x, args.seed_s)
    else:
        f = cubefunc.parse_function_table(args.table)
        if args.b is None:
            raise SystemExit("--b is required with --table")
        cfg = prng.GeneratorConfig(f, args.b, args.seed_x, args.seed_s)
    if args.out:
        with open(args.out, "wb") as fh:
            stats.export_raw(cfg, args.bytes, fh)
    elif args.binary_stdout:
        stats.export_raw(cfg, args.bytes, sys.stdout.buffer)
    else:
        raise SystemExit("raw bytes need --out FILE or --binary-stdout")
    return 0


def _cmd_stats(args) -> int:
    meta = {"alpha": args.alpha}
    if args.infile:
        data = Path(args.infile).read_bytes()
        if args.bits is not None:
            data = data[: -(-args.bits // 8)]
        meta["source"] = args.infile
    else:
        if args.bits is None:
            raise SystemExit("--bits is required with --profile")
        cfg = prng.paper_profile(args.profile, seed_x=args.seed_x, seed_s=args.seed_s)
        state = prng.GeneratorState(cfg)
        data = state.byte_stream(-(-args.bits // 8))
        meta.update(
            {"profile": args.profile, "b": cfg.b, "seed_x": args.seed_x, "seed_s": args.seed_s}
        )
    bits = stats.bits_from_bytes(data)
    if args.bits is not None:
        bits = bits[: args.bits]
    reports = stats.run_battery(bits, args.alpha, cell_bits=args.cell_bits)
    if args.json:
        print(json.dumps({"meta": meta, "tests": [r.to_dict() for r in reports]}, indent=2))
    else:
        print(stats.battery_text(reports))
    if args.out:
        for p in report.write_battery_report(reports, args.out, meta=meta):
            print(f"wrote {p}", file=sys.stderr)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_oracle_verify(args) -> int:
    summary = oracle.verify_theorems(args.n)
    print(summary.to_text())
    return 0 if summary.all_pass else 1


def _hex(value: str) -> int:
    return int(value, 16)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubewalk",
        description="Generators built on n-cube walks with a balanced Gray cycle removed",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gray = sub.add_parser("gray", help="balanced Gray code pipeline")
    gray_sub = gray.add_subparsers(dest="gray_command", required=True)
    gen = gray_sub.add_parser("gen", help="emit balanced transition sequences")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--limit", type=int, default=250_000, help="max decompositions examined")
    gen.add_argument("--totally-balanced", action="store_true")
    gen.add_argument("--jobs", type=int, default=1)
    gen.add_argument("--json", action="store_true")
    gen.set_defaults(func=_cmd_gray_gen)
    cnt = gray_sub.add_parser("count", help="decomposition counts")
    cnt.add_argument("--n", type=int, required=True)
    cnt.add_argument("--json", action="store_true")
    cnt.set_defaults(func=_cmd_gray_count)

    func = sub.add_parser("func", help="build and check cube maps")
    func_sub = func.add_subparsers(dest="func_command", required=True)
    build = func_sub.add_parser("build", help="Gray code -> function table")
    src = build.add_mutually_exclusive_group(required=True)
    src.add_argument("--code", help="file with one codeword list (decimal, comma-separated)")
    src.add_argument("--inline", help="transition sequence, e.g. 3,1,3,2,3,1,3,2")
    build.set_defaults(func=_cmd_func_build)
    check = func_sub.add_parser("check", help="DSSC verdict for a function table")
    ctarget = check.add_mutually_exclusive_group(required=True)
    ctarget.add_argument("--table", help="bracketed image list, e.g. [1,3,0,2]")
    ctarget.add_argument("--profile", choices=prng.PROFILE_TAGS)
    check.add_argument("--json", action="store_true")
    check.set_defaults(func=_cmd_func_check)

    mix = sub.add_parser("mix", help="mixing-time report")
    target = mix.add_mutually_exclusive_group(required=True)
    target.add_argument("--table")
    target.add_argument("--profile", choices=prng.PROFILE_TAGS)
    mix.add_argument("--epsilon", type=float, default=1e-4)
    mix.add_argument("--cap", type=int, default=10_000)
    mix.add_argument("--sweep", action="store_true")
    mix.add_argument("--out", help="directory for the CSV + PNG report")
    mix.add_argument("--json", action="store_true")
    mix.set_defaults(func=_cmd_mix)

    rand = sub.add_parser("rand", help="emit raw generator bytes")
    rtarget = rand.add_mutually_exclusive_group(required=True)
    rtarget.add_argument("--profile", choices=prng.PROFILE_TAGS)
    rtarget.add_argument("--table")
    rand.add_argument("--b", type=int, help="steps per block (defaults to the profile's)")
    rand.add_argument("--seed-x", type=_hex, required=True, help="initial configuration (hex)")
    rand.add_argument("--seed-s", type=_hex, required=True, help="strategy seed (hex)")
    rand.add_argument("--bytes", type=int, required=True)
    rand.add_argument("--out")
    rand.add_argument("--binary-stdout", action="store_true")
    rand.set_defaults(func=_cmd_rand)

    st = sub.add_parser("stats", help="run the randomness mini-battery")
    starget = st.add_mutually_exclusive_group(required=True)
    starget.add_argument("--in", dest="infile", help="raw byte file")
    starget.add_argument("--profile", choices=prng.PROFILE_TAGS)
    st.add_argument("--bits", type=int)
    st.add_argument("--alpha", type=float, default=0.01)
    st.add_argument("--cell-bits", type=int, default=8)
    st.add_argument("--seed-x", type=_hex, default=0)
    st.add_argument("--seed-s", type=_hex, default=1)
    st.add_argument("--out", help="directory for the CSV + PNG report")
    st.add_argument("--json", action="store_true")
    st.set_defaults(func=_cmd_stats)

    orc = sub.add_parser("oracle", help="exhaustive small-cube verification")
    orc_sub = orc.add_subparsers(dest="oracle_command", required=True)
    verify = orc_sub.add_parser("verify", help="check every cycle removal at size n")
    verify.add_argument("--n", type=int, required=True, choices=(2, 3, 4))
    verify.set_defaults(func=_cmd_oracle_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
