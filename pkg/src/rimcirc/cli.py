"""Command line front end.

Exit codes: 0 success, 1 property violation (failed check, invalid
circuit encoding), 2 usage or malformed input, 3 brute-force cap exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import analysis, completion, unambiguous
from .circuit import (
    CODE0,
    Circuit,
    bits_to_hex,
    decode_precedence,
    encode_precedence,
    encode_records,
    eval_circuit,
    hex_to_bits,
)
from .convert import circuit_of_word, word_of_circuit
from .errors import CircuitInvalid, PropertyViolation, ResourceCap, RimError
from .genword import ALPHABETS, eval_word_on_input, parse_word
from .oracle import DEFAULT_CAP, brute_force_table
from .prefix_algebra import show
from .rim import RimTable, apply
from .suites import SUITES, run_suite


def _read(value: str) -> str:
    """Argument text: '-' is stdin, an existing path is read, else literal."""
    if value == "-":
        return sys.stdin.read()
    if os.path.isfile(value):
        with open(value) as fh:
            return fh.read()
    return value


def _table(value: str) -> RimTable:
    return RimTable.from_text(_read(value).replace(",", "\n").replace(";", "\n"))


def _word(args):
    return parse_word(_read(args.word) if args.word != "" else "", args.alphabet)


def _circuit(value: str) -> Circuit:
    return Circuit.from_netlist(_read(value))


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# Subcommands -----------------------------------------------------------------

def cmd_encode(args):
    c = _circuit(args.circuit)
    if args.format == "text":
        _out(encode_records(c))
    elif args.format == "hex":
        _out(bits_to_hex(encode_precedence(c)))
    else:
        _out(encode_precedence(c))


def cmd_decode(args):
    text = _read(args.code).strip()
    if args.format == "hex" or (args.format != "text" and ":" in text):
        bits = hex_to_bits(text)
    elif args.format == "text":
        bits = "".join(CODE0.get(ch, "?") for ch in text)
    else:
        bits = text
    _out(decode_precedence(bits).to_netlist())


def cmd_eval(args):
    x = "" if args.input in ("eps", "") else args.input
    sources = [s for s in (args.word, args.circuit, args.table) if s is not None]
    if len(sources) != 1:
        raise _Usage("give exactly one of --word, --circuit, --table")
    if args.word is not None:
        y = eval_word_on_input(_word(args), x)
    elif args.circuit is not None:
        y = eval_circuit(_circuit(args.circuit), x)
    else:
        y = apply(_table(args.table), x)
    _out("undefined" if y is None else show(y) if y == "" else y)


def cmd_w_of_c(args):
    alpha = ALPHABETS[args.alphabet] if args.alphabet else None
    _out(str(word_of_circuit(_circuit(args.circuit), alpha)))


def cmd_c_of_w(args):
    _out(circuit_of_word(_word(args)).to_netlist())


def cmd_complete(args):
    m = args.method
    if m in ("tilde", "bot", "table"):
        if args.table is None:
            raise _Usage(f"--method {m} needs --table")
        f = _table(args.table)
        if m == "tilde":
            out = completion.tilde_complete(f)
        elif m == "bot":
            out = completion.three_letter_complete(f)
        else:
            out = completion.nondet_table_complete(f, args.mode)
        _out(out.to_text())
    elif m == "word":
        if args.word is None:
            raise _Usage("--method word needs --word")
        w = _word(args)
        if w.alphabet.name in ("M", "Mpfl") and args.mode == "M":
            _out(completion.complete_M_generators(w).to_text())
        else:
            _out(str(completion.complete_pfl_word(w)))
    else:
        if args.circuit is None:
            raise _Usage("--method circuit needs --circuit")
        c = _circuit(args.circuit)
        out = completion.tilde_circuit(c) if args.classical else completion.complete_circuit(c)
        _out(out.to_netlist())


def cmd_decompose(args):
    w = _word(args)
    if args.algo == "seq":
        ts = unambiguous.decompose_word_sequential(w)
    else:
        ts = unambiguous.decompose_word_parallel(w, workers=args.workers)
    _out(ts.to_text(args.cap))


def cmd_compose_unions(args):
    U = unambiguous.TaggedWordSet.from_text(_read(args.first))
    V = unambiguous.TaggedWordSet.from_text(_read(args.second))
    _out(unambiguous.compose_tagged_sets(U, V).to_text(args.cap))


def cmd_empty(args):
    _out("true" if analysis.emptiness_check(_word(args), args.cap) else "false")


def cmd_delta(args):
    w = _word(args)
    if w.alphabet.name not in ("pfl", "tfl"):
        w = parse_word(str(w), "pfl")
    d = analysis.delta_compute(w, args.cap)
    _out("undefined" if d is None else str(d))


def cmd_check(args):
    checks = run_suite(args.suite, args.seed, args.cap)
    for c in checks:
        _out(c.line())
    if not all(c.passed for c in checks):
        raise PropertyViolation(f"{sum(not c.passed for c in checks)} check(s) failed")


def cmd_oracle(args):
    _out(brute_force_table(_word(args), args.level, args.cap).to_text())


class _Usage(Exception):
    pass


def _global_flags(with_defaults: bool) -> argparse.ArgumentParser:
    # Subcommands accept the same flags, but must not reset values given
    # before the subcommand name, so their copies carry no defaults.
    def d(value):
        return value if with_defaults else argparse.SUPPRESS
    g = argparse.ArgumentParser(add_help=False)
    g.add_argument("--cap", type=int, default=d(DEFAULT_CAP), help="largest exhaustive input length")
    g.add_argument("--seed", type=int, default=d(0))
    g.add_argument("--format", choices=("text", "bits", "hex"), default=d("bits"))
    g.add_argument("--alphabet", choices=sorted(ALPHABETS), default=d(None))
    return g


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rimcirc", parents=[_global_flags(True)],
                                description="Right-ideal morphisms, circuits and generator words.")
    sub = p.add_subparsers(dest="command", required=True)
    common = _global_flags(False)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("encode", cmd_encode, "encode a netlist")
    sp.add_argument("--circuit", required=True)
    sp = add("decode", cmd_decode, "decode bits, hex or record text into a netlist")
    sp.add_argument("--code", required=True)
    sp = add("eval", cmd_eval, "evaluate a word, circuit or table on one input")
    sp.add_argument("--word")
    sp.add_argument("--circuit")
    sp.add_argument("--table")
    sp.add_argument("--input", required=True)
    sp = add("w-of-c", cmd_w_of_c, "compile a circuit into a generator word")
    sp.add_argument("--circuit", required=True)
    sp = add("c-of-w", cmd_c_of_w, "compile a generator word into a circuit")
    sp.add_argument("--word", required=True)
    sp = add("complete", cmd_complete, "completions of tables, words and circuits")
    sp.add_argument("--method", choices=("tilde", "bot", "table", "word", "circuit"), required=True)
    sp.add_argument("--mode", choices=("M", "plep"), default="M")
    sp.add_argument("--classical", action="store_true", help="circuit method: classical completion")
    sp.add_argument("--table")
    sp.add_argument("--word")
    sp.add_argument("--circuit")
    sp = add("decompose", cmd_decompose, "split a word into pieces with one delta each")
    sp.add_argument("--algo", choices=("seq", "par"), default="seq")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--word", required=True)
    sp = add("compose-unions", cmd_compose_unions, "compose two tagged word sets (first applied first)")
    sp.add_argument("--first", required=True)
    sp.add_argument("--second", required=True)
    sp = add("empty", cmd_empty, "decide whether a word is the empty function")
    sp.add_argument("--word", required=True)
    sp = add("delta", cmd_delta, "delta of a pfl word, or undefined")
    sp.add_argument("--word", required=True)
    sp = add("check", cmd_check, "run seeded property suites")
    sp.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    sp = add("oracle", cmd_oracle, "brute-force table of a word at one level")
    sp.add_argument("--word", required=True)
    sp.add_argument("--level", type=int, required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        args.func(args)
    except ResourceCap as e:
        msg = f"resource cap: {e}"
        if e.required is not None:
            msg += f" (needs m={e.required}; raise --cap)"
        print(msg, file=sys.stderr)
        return 3
    except CircuitInvalid as e:
        where = f" at step {e.step}" if e.step else ""
        print(f"invalid circuit{where}: {e}", file=sys.stderr)
        return 1
    except PropertyViolation as e:
        print(f"property violation: {e}", file=sys.stderr)
        return 1
    except (_Usage, RimError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
