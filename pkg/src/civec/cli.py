"""Command line interface.

Subcommands: gen (synthetic or text-derived datasets), encode / decode
(.ivec <-> .civ containers), stats (dataset summary), bench (timed and
counted workload runs, CSV output), report (tables from bench CSV).

Exit status: 0 on success, 1 on runtime failure (bad file, checksum
mismatch), 2 on usage errors.
"""

import argparse
import csv
import os
import sys

from . import codecs, container, datasets, metering, workloads

CSV_COLUMNS = ("codec", "dataset", "workload", "ops", "size_bytes",
               "time_ns", "energy_pkg_uj", "instructions", "cycles",
               "l1d_loads", "llc_loads", "checksum")


def _parse_args(argv):
    p = argparse.ArgumentParser(
        prog="civec",
        description="compressed integer vectors: encode, query, measure")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a dataset (.ivec)")
    g.add_argument("kind", choices=("sorted", "uniform", "runs",
                                    "bwt", "lcp", "psi"))
    g.add_argument("--n", type=int, default=1 << 20)
    g.add_argument("--max-value", type=int, default=(1 << 20) - 1)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--mean-run", type=int, default=16)
    g.add_argument("--text", help="input file for bwt/lcp/psi")
    g.add_argument("--limit", type=int, help="truncate text to this many bytes")
    g.add_argument("--out", required=True)

    e = sub.add_parser("encode", help="encode an .ivec into a .civ container")
    e.add_argument("input")
    e.add_argument("output")
    e.add_argument("--codec", required=True, choices=codecs.CODEC_IDS)
    e.add_argument("--sampling", type=int)
    e.add_argument("--dac-widths", help="comma-separated level widths")
    e.add_argument("--pfd-block", type=int, default=128)
    e.add_argument("--pfd-exc-frac", type=float, default=0.10)

    d = sub.add_parser("decode", help="decode a .civ back to .ivec")
    d.add_argument("input")
    d.add_argument("output")

    s = sub.add_parser("stats", help="summary statistics of an .ivec")
    s.add_argument("input")

    b = sub.add_parser("bench", help="run workloads over codecs, write CSV")
    b.add_argument("input", help="dataset (.ivec)")
    b.add_argument("--codec", default="all",
                   help="comma-separated codec ids or 'all'")
    b.add_argument("--workload", default="randsum",
                   choices=tuple(workloads.RUNNERS))
    b.add_argument("--ops", default="100000",
                   help="comma-separated op counts; 0 measures container load")
    b.add_argument("--reps", type=int, default=10)
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--sampling", type=int)
    b.add_argument("--target-max", type=int)
    b.add_argument("--pin-core", type=int)
    b.add_argument("--out", help="CSV path (default: stdout)")

    r = sub.add_parser("report", help="tabulate a bench CSV by metric")
    r.add_argument("csv")
    r.add_argument("--metric", default="time_ns", choices=CSV_COLUMNS[5:11])
    r.add_argument("--out", help="write the table here instead of stdout")

    args = p.parse_args(argv)
    if args.cmd == "gen" and args.kind in ("bwt", "lcp", "psi") \
            and not args.text:
        p.error(f"--text is required for {args.kind}")
    return p, args


def _cmd_gen(args):
    kind = args.kind
    if kind in ("sorted", "uniform", "runs"):
        if kind == "sorted":
            v = datasets.gen_sorted(args.n, args.max_value, args.seed)
        elif kind == "uniform":
            v = datasets.gen_uniform(args.n, args.max_value, args.seed)
        else:
            v = datasets.gen_runs(args.n, args.max_value, args.seed,
                                  args.mean_run)
    else:
        with open(args.text, "rb") as f:
            data = f.read()
        if args.limit:
            data = data[:args.limit]
        t = datasets.TextInput(data)
        sa = datasets.suffix_array(t)
        fn = {"bwt": datasets.bwt, "lcp": datasets.lcp, "psi": datasets.psi}
        v = fn[kind](t, sa)
    container.write_ivec(args.out, v)
    print(f"wrote {len(v)} values to {args.out}")
    return 0


def _params_kwargs(args):
    kw = {}
    if getattr(args, "sampling", None) is not None:
        kw["sampling"] = args.sampling
    if getattr(args, "dac_widths", None):
        kw["dac_widths"] = tuple(int(x) for x in args.dac_widths.split(","))
    if getattr(args, "pfd_block", None) is not None:
        kw["pfd_block"] = args.pfd_block
    if getattr(args, "pfd_exc_frac", None) is not None:
        kw["pfd_exc_frac"] = args.pfd_exc_frac
    return kw


def _cmd_encode(args):
    values = container.read_ivec(args.input)
    vec = codecs.build(values, args.codec, **_params_kwargs(args))
    container.write_vector(args.output, vec)
    rep = vec.size_report()
    print(f"codec {rep.codec}: n={rep.n} payload={rep.payload_bits}b "
          f"samples={rep.sample_bits}b aux={rep.aux_bits}b "
          f"total={rep.total_bytes}B ({rep.percent_of_plain:.1f}% of plain)")
    return 0


def _cmd_decode(args):
    vec = container.read_vector(args.input)
    container.write_ivec(args.output, vec.decode_all())
    print(f"decoded {vec.n} values ({vec.codec_id}) to {args.output}")
    return 0


def _cmd_stats(args):
    st = datasets.stats(container.read_ivec(args.input))
    print(f"n {st.n}")
    print(f"max value {st.max_value}")
    print(f"avg value {st.avg_value}")
    print(f"max diff {st.max_diff}")
    print(f"runs {st.runs}")
    return 0


def _fmt(v):
    return "" if v is None else str(v)


def _cmd_bench(args):
    values = container.read_ivec(args.input)
    dataset = os.path.basename(args.input)
    ids = codecs.CODEC_IDS if args.codec == "all" \
        else tuple(args.codec.split(","))
    for cid in ids:
        if cid not in codecs.CODEC_IDS:
            raise ValueError(f"unknown codec {cid!r}")
    ops_list = [int(x) for x in args.ops.split(",")]
    kw = _params_kwargs(args)

    rows = []
    expected = {}  # ops -> checksum from the first codec
    for cid in ids:
        vec = codecs.build(values, cid, **kw)
        blob = container.serialize(vec)
        size_bytes = vec.size_report().total_bytes
        for ops in ops_list:
            if ops == 0:
                work = lambda: container.deserialize(blob)
                checksum = ""
            else:
                def work(vec=vec, ops=ops):
                    res = workloads.run(args.workload, vec, ops, args.seed,
                                        args.target_max)
                    work.checksum = res.checksum
                work.checksum = None
                work()
                checksum = work.checksum
                if ops in expected and expected[ops] != checksum:
                    raise ValueError(
                        f"checksum mismatch for codec {cid}: got {checksum}, "
                        f"expected {expected[ops]}")
                expected.setdefault(ops, checksum)
            rec = metering.measure(work, reps=args.reps,
                                   pin_core=args.pin_core)
            m = rec.as_dict()
            rows.append({
                "codec": cid, "dataset": dataset, "workload": args.workload,
                "ops": ops, "size_bytes": size_bytes,
                "time_ns": m["time_ns"],
                "energy_pkg_uj": _fmt(m["energy_pkg_uj"]),
                "instructions": _fmt(m["instructions"]),
                "cycles": _fmt(m["cycles"]),
                "l1d_loads": _fmt(m["l1d_loads"]),
                "llc_loads": _fmt(m["llc_loads"]),
                "checksum": checksum,
            })

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=CSV_COLUMNS)
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.out:
            out.close()
    return 0


def _cmd_report(args):
    with open(args.csv, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        print("empty CSV")
        return 0
    key = args.metric
    byops = sorted({int(r["ops"]) for r in rows})
    ids = []
    for r in rows:
        if r["codec"] not in ids:
            ids.append(r["codec"])
    lines = []
    head = ["codec".ljust(10)] + [f"{o:>14}" for o in byops]
    lines.append(" ".join(head))
    for cid in ids:
        cells = [cid.ljust(10)]
        for o in byops:
            vals = [r[key] for r in rows
                    if r["codec"] == cid and int(r["ops"]) == o]
            cells.append(f"{(vals[0] if vals and vals[0] else '-'):>14}")
        lines.append(" ".join(cells))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "encode": _cmd_encode,
    "decode": _cmd_decode,
    "stats": _cmd_stats,
    "bench": _cmd_bench,
    "report": _cmd_report,
}


def main(argv=None):
    parser, args = _parse_args(argv)
    try:
        return _COMMANDS[args.cmd](args)
    except BrokenPipeError:
        return 1
    except (OSError, ValueError, container.FormatError) as exc:
        print(f"civec: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
