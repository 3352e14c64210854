"""``agt`` command-line front end.

Exit status: 0 for a definite answer, 2 when a budget ran out before an answer
was reached, 1 for errors (including usage errors).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import algebra, constructions, dynamics, words
from .machine import Mealy, MachineError, classify, parse_machine, serialize

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUDGET = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


class Context:
    def __init__(self, args, out):
        self.args = args
        self.out = out
        self._stdin_used = False

    @property
    def json(self) -> bool:
        return getattr(self.args, "json", False)

    def emit(self, obj: dict | None = None, text: str | None = None) -> None:
        if self.json:
            if obj is not None:
                self.out.write(json.dumps(obj, ensure_ascii=False) + "\n")
        elif text is not None:
            self.out.write(text if text.endswith("\n") else text + "\n")

    def load(self, ref: str) -> Mealy:
        return parse_machine(self.read_ref(ref))

    def read_ref(self, ref: str) -> str:
        if ref == "-":
            if self._stdin_used:
                raise MachineError("stdin can only be read once")
            self._stdin_used = True
            return sys.stdin.read()
        if ref.startswith("corpus:"):
            return constructions.corpus_text(ref[len("corpus:") :])
        with open(ref, encoding="utf-8") as fh:
            return fh.read()


def _word(m: Mealy, text: str) -> words.GroupWord:
    return words.parse_word(text, m.states)


def _letters(m: Mealy, text: str) -> tuple[str, ...]:
    toks = tuple(text.split())
    for t in toks:
        if t not in m.alphabet:
            raise MachineError(f"unknown letter {t!r}")
    return toks


def _graph_text(g: dynamics.LabeledGraph, fmt: str) -> str:
    if fmt == "dot":
        return g.to_dot()
    if fmt == "tsv":
        return g.to_tsv()
    lines = [f"vertices: {len(g)}"]
    lines.extend(f"{g.vertices[s]} --{lab}--> {g.vertices[d]}" for s, lab, d in g.edges)
    return "\n".join(lines)


def _machine_out(ctx: Context, m: Mealy) -> int:
    ctx.emit({"command": ctx.args.cmd, "machine": serialize(m), "notes": list(m.notes)}, serialize(m))
    for note in m.notes:
        print(f"note: {note}", file=sys.stderr)
    return EXIT_OK


# -- subcommands --------------------------------------------------------------


def cmd_classify(ctx):
    flags = classify(ctx.load(ctx.args.machine))
    d = flags.as_dict()
    text = "\n".join(
        f"{k}: {' '.join(v) if isinstance(v, list) else str(v).lower()}" for k, v in d.items()
    )
    ctx.emit({"command": "classify", **d}, text)
    return EXIT_OK


def _unary(op):
    def run(ctx):
        return _machine_out(ctx, op(ctx.load(ctx.args.machine)))

    return run


def cmd_product(ctx):
    a = ctx.load(ctx.args.left)
    b = ctx.load(ctx.args.right)
    return _machine_out(ctx, algebra.product(a, b, flatten=ctx.args.flatten))


def cmd_union(ctx):
    return _machine_out(ctx, algebra.disjoint_union(ctx.load(ctx.args.left), ctx.load(ctx.args.right)))


def cmd_power(ctx):
    m = ctx.load(ctx.args.machine)
    try:
        p = algebra.power(m, ctx.args.k, budget=ctx.args.budget)
    except algebra.BudgetExceeded as exc:
        ctx.emit({"command": "power", "outcome": "budget", "size": exc.size}, f"budget exhausted: {exc}")
        return EXIT_BUDGET
    return _machine_out(ctx, p)


def cmd_act(ctx):
    m = ctx.load(ctx.args.machine)
    out, sec = dynamics.act(m, _word(m, ctx.args.w), _letters(m, ctx.args.i))
    ctx.emit(
        {"command": "act", "output": " ".join(out), "section": words.format_word(sec)},
        f"output: {' '.join(out)}\nsection: {words.format_word(sec)}",
    )
    return EXIT_OK


def cmd_is_identity(ctx):
    m = ctx.load(ctx.args.machine)
    w = _word(m, ctx.args.w)
    try:
        r = dynamics.is_identity(m, w, limit=ctx.args.limit)
    except algebra.BudgetExceeded as exc:
        ctx.emit({"command": "is-identity", "word": words.format_word(w), "outcome": "budget"}, f"budget exhausted: {exc}")
        return EXIT_BUDGET
    ctx.emit({"command": "is-identity", "word": words.format_word(w), "identity": r}, str(r).lower())
    return EXIT_OK


def cmd_order(ctx):
    m = ctx.load(ctx.args.machine)
    w = _word(m, ctx.args.w)
    n = dynamics.order_of(m, w, ctx.args.bound)
    if n is None:
        ctx.emit(
            {"command": "order", "word": words.format_word(w), "outcome": "budget", "bound": ctx.args.bound},
            f"order exceeds {ctx.args.bound}",
        )
        return EXIT_BUDGET
    ctx.emit({"command": "order", "word": words.format_word(w), "outcome": "finite", "order": n}, str(n))
    return EXIT_OK


def _orbit_out(ctx, res: dynamics.OrbitResult, command: str, extra: dict | None = None):
    extra = extra or {}
    if not res.finite:
        ctx.emit(
            {"command": command, **extra, "outcome": "budget", "visited": res.visited},
            f"budget exhausted after {res.visited} vertices",
        )
        return EXIT_BUDGET
    ctx.emit(
        {"command": command, **extra, "outcome": "finite", "graph": res.graph.as_dict()},
        _graph_text(res.graph, ctx.args.format),
    )
    return EXIT_OK


def cmd_orbit(ctx):
    m = ctx.load(ctx.args.machine)
    res = dynamics.orbit_of_word(m, _letters(m, ctx.args.v), ctx.args.budget, signed=ctx.args.signed)
    return _orbit_out(ctx, res, "orbit")


def cmd_schreier(ctx):
    m = ctx.load(ctx.args.machine)
    g = dynamics.schreier_level(m, ctx.args.level, _letters(m, ctx.args.v))
    ctx.emit({"command": "schreier", "level": ctx.args.level, "graph": g.as_dict()}, _graph_text(g, ctx.args.format))
    return EXIT_OK


def _point(ctx, m):
    x = _word(m, ctx.args.x or "")
    y = _word(m, ctx.args.y)
    if not y:
        raise words.WordError("period must be nonempty")
    return dynamics.PeriodicPoint.canonical(x, y)


def cmd_periodic_orbit(ctx):
    m = ctx.load(ctx.args.machine)
    p = _point(ctx, m)
    res = dynamics.periodic_orbit(m, p, ctx.args.budget)
    return _orbit_out(ctx, res, "periodic-orbit", {"point": p.label()})


def cmd_extract_relation(ctx):
    m = ctx.load(ctx.args.machine)
    p = _point(ctx, m)
    res = dynamics.periodic_orbit(m, p, ctx.args.budget)
    if not res.finite:
        return _orbit_out(ctx, res, "extract-relation", {"point": p.label()})
    rel = dynamics.extract_relation(m, res)
    text = words.format_word(rel)
    ctx.emit({"command": "extract-relation", "point": p.label(), "outcome": "finite", "relation": text, "length": len(rel)}, text)
    return EXIT_OK


def cmd_chi(ctx):
    m = ctx.load(ctx.args.machine)
    rep = dynamics.growth_chi(m, ctx.args.max_n, ctx.args.budget, signed_inputs=ctx.args.signed_inputs, threads=ctx.args.threads)
    lines = [f"{n}\t{c}" for n, c in rep.values]
    lines += [f"{n}\tbudget" for n in rep.exhausted]
    lines.append(f"window: {rep.window[0]}-{rep.window[1]}" if rep.window else "window: none")
    ctx.emit({"command": "chi", **rep.as_dict()}, "\n".join(lines))
    return EXIT_BUDGET if rep.exhausted else EXIT_OK


def cmd_ess_trivial(ctx):
    x = words.parse_word(ctx.args.x or "")
    y = words.parse_word(ctx.args.y)
    p = dynamics.PeriodicPoint(x, y)
    r = dynamics.essentially_trivial(p)
    ctx.emit({"command": "ess-trivial", "point": p.label(), "essentially_trivial": r}, str(r).lower())
    return EXIT_OK


def cmd_relations(ctx):
    m = ctx.load(ctx.args.machine)
    rep = dynamics.find_relations(
        m,
        ctx.args.max_len,
        positive_only=ctx.args.positive,
        pairs=ctx.args.pairs,
        include_trivial=ctx.args.include_trivial,
        threads=ctx.args.threads,
        limit=ctx.args.limit,
    )
    if ctx.json:
        for w in rep.relations:
            ctx.emit({"command": "relations", "kind": "relation", "word": words.format_word(w)})
        for u, v in rep.pairs:
            ctx.emit({"command": "relations", "kind": "pair", "left": words.format_word(u), "right": words.format_word(v)})
        for w in rep.undetermined:
            ctx.emit({"command": "relations", "kind": "undetermined", "word": words.format_word(w)})
        ctx.emit({"command": "relations", "kind": "summary", "relations": len(rep.relations), "pairs": len(rep.pairs), "undetermined": len(rep.undetermined)})
    else:
        for w in rep.relations:
            ctx.out.write(words.format_word(w) + "\n")
        for u, v in rep.pairs:
            ctx.out.write(f"{words.format_word(u)} = {words.format_word(v)}\n")
        for w in rep.undetermined:
            ctx.out.write(f"undetermined: {words.format_word(w)}\n")
    return EXIT_BUDGET if rep.undetermined else EXIT_OK


def cmd_level_transitive(ctx):
    m = ctx.load(ctx.args.machine)
    res = dynamics.level_transitive(m, ctx.args.max_k, budget=ctx.args.budget)
    if ctx.json:
        for k, t in res:
            ctx.emit({"command": "level-transitive", "level": k, "transitive": t})
    else:
        for k, t in res:
            ctx.out.write(f"{k}\t{'budget' if t is None else str(t).lower()}\n")
    return EXIT_BUDGET if any(t is None for _, t in res) else EXIT_OK


def cmd_quotient_cayley(ctx):
    m = ctx.load(ctx.args.machine)
    try:
        g = dynamics.level_quotient_cayley(m, ctx.args.level, ctx.args.budget)
    except algebra.BudgetExceeded as exc:
        ctx.emit({"command": "quotient-cayley", "outcome": "budget", "visited": exc.size}, f"budget exhausted: {exc}")
        return EXIT_BUDGET
    ctx.emit({"command": "quotient-cayley", "outcome": "finite", "graph": g.as_dict()}, _graph_text(g, ctx.args.format))
    return EXIT_OK


def cmd_g_regular(ctx):
    m = ctx.load(ctx.args.machine)
    w = _word(m, ctx.args.w)
    u = dynamics.g_regular(m, w, ctx.args.bound)
    if u is None:
        ctx.emit({"command": "g-regular", "word": words.format_word(w), "outcome": "budget", "bound": ctx.args.bound}, "undetermined")
        return EXIT_BUDGET
    ctx.emit({"command": "g-regular", "word": words.format_word(w), "outcome": "regular", "witness": " ".join(u)}, f"regular: {' '.join(u)}")
    return EXIT_OK


def cmd_fragile(ctx):
    m = ctx.load(ctx.args.machine)
    w = _word(m, ctx.args.w)
    r = words.is_fragile(m, w)
    ctx.emit(
        {"command": "fragile", "word": words.format_word(w), "fragile": bool(r), "letter": r.letter, "reason": r.reason},
        f"fragile: {r.letter}" if r else f"not fragile ({r.reason})",
    )
    return EXIT_OK


def cmd_strongly_fragile(ctx):
    w = words.parse_word(ctx.args.w)
    ok, degenerate = words.strong_fragility(w)
    text = str(ok).lower() + (" (degenerate content)" if degenerate else "")
    ctx.emit({"command": "strongly-fragile", "word": words.format_word(w), "strongly_fragile": ok, "degenerate": degenerate}, text)
    return EXIT_OK


def cmd_commutators(ctx):
    gens = ctx.args.gens.split()
    stream = words.commutator_words(gens, ctx.args.bound, all_orders=ctx.args.all_orders)
    if ctx.args.sorted_by_length is not None:
        buf = []
        for w in stream:
            buf.append(w)
            if len(buf) >= ctx.args.sorted_by_length:
                break
        stream = iter(sorted(buf, key=len))
    count = 0
    for w in stream:
        if ctx.args.limit is not None and count >= ctx.args.limit:
            break
        ctx.emit({"command": "commutators", "word": words.format_word(w), "length": len(w)}, words.format_word(w))
        count += 1
    return EXIT_OK


def _group_arg(ctx) -> constructions.FiniteGroupTable:
    if ctx.args.zn is not None:
        return constructions.zn_group(ctx.args.zn)
    if ctx.args.table is not None:
        return constructions.group_from_table(ctx.read_ref(ctx.args.table))
    raise UsageError("make cayley/bicayley needs --zn N or --table FILE")


def cmd_make(ctx):
    a = ctx.args
    kind = a.kind
    if kind == "sink":
        m = constructions.sink_machine((a.alphabet or "").split())
    elif kind == "sq":
        states = (a.states or "").split()
        m = constructions.s_q_dual(states) if a.dual else constructions.s_q(states)
    elif kind == "cayley":
        m = constructions.cayley_machine(_group_arg(ctx))
    elif kind == "bicayley":
        m = constructions.bi_cayley_machine(_group_arg(ctx))
    else:
        if not a.machine:
            raise UsageError("make embed-sum needs a machine")
        b = ctx.load(a.machine)
        subset = a.subset.split() if a.subset else list(b.states)
        m = constructions.dual_embed_sum(b, subset)
    return _machine_out(ctx, m)


def cmd_corpus(ctx):
    if ctx.args.action == "list":
        names = constructions.corpus_names()
        if ctx.json:
            for n in names:
                ctx.emit({"command": "corpus", "name": n})
        else:
            ctx.out.write("".join(n + "\n" for n in names))
        return EXIT_OK
    if not ctx.args.name:
        raise UsageError("corpus get needs a name")
    text = constructions.corpus_text(ctx.args.name)
    ctx.emit({"command": "corpus", "name": ctx.args.name, "text": text}, text)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="agt", description="Experiments on automaton groups given by Mealy machines.")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser, metavar="command")
    sub.required = True

    def add(name, func, help_, machine=True):
        sp = sub.add_parser(name, help=help_, description=help_)
        if machine:
            sp.add_argument("machine", help="machine file, '-' for stdin, or corpus:<name>")
        sp.add_argument("--json", action="store_true", help="emit JSON lines")
        sp.set_defaults(func=func)
        return sp

    def fmt(sp):
        sp.add_argument("--format", choices=["text", "dot", "tsv"], default="text")

    add("classify", cmd_classify, "structural flags")
    add("dual", _unary(algebra.dual), "dual machine")
    add("inverse", _unary(algebra.inverse), "inverse machine")
    add("enrich", _unary(algebra.enrich), "extend a reversible machine to A + A^-1")
    add("enriched-dual", _unary(algebra.enriched_dual), "enriched dual")
    add("reduce-machine", _unary(algebra.reduction), "collapse trivially acting states into one sink")
    for name, func, h in (("product", cmd_product, "product machine"), ("union", cmd_union, "disjoint union")):
        sp = add(name, func, h, machine=False)
        sp.add_argument("left")
        sp.add_argument("right")
        if name == "product":
            sp.add_argument("--flatten", action="store_true", help="flatten nested pair labels")
    sp = add("power", cmd_power, "k-th power")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("--budget", type=int, default=algebra.DEFAULT_STATE_BUDGET)

    sp = add("act", cmd_act, "image of an input word and the section reached")
    sp.add_argument("-w", required=True, help="state word, rightmost letter acts first")
    sp.add_argument("-i", required=True, help="input word")
    sp = add("is-identity", cmd_is_identity, "word problem")
    sp.add_argument("-w", required=True)
    sp.add_argument("--limit", type=int, default=dynamics.DEFAULT_SECTION_LIMIT)
    sp = add("order", cmd_order, "order of an element up to a bound")
    sp.add_argument("-w", required=True)
    sp.add_argument("--bound", type=int, default=64)
    sp = add("orbit", cmd_orbit, "orbital graph of an input word")
    sp.add_argument("-v", required=True)
    sp.add_argument("--budget", type=int, default=10**5)
    sp.add_argument("--signed", action="store_true", help="also use inverse generators")
    fmt(sp)
    sp = add("schreier", cmd_schreier, "level-k Schreier graph")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("-v", required=True)
    fmt(sp)
    for name, func, h in (
        ("periodic-orbit", cmd_periodic_orbit, "orbit of x y^w under the enriched dual"),
        ("extract-relation", cmd_extract_relation, "relation read off a finite periodic orbit"),
    ):
        sp = add(name, func, h)
        sp.add_argument("-x", default="", help="preperiod (read first)")
        sp.add_argument("-y", required=True, help="period")
        sp.add_argument("--budget", type=int, default=10**4)
        fmt(sp)
    sp = add("chi", cmd_chi, "growth function chi")
    sp.add_argument("--max-n", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10**6)
    sp.add_argument("--signed-inputs", action="store_true")
    sp.add_argument("--threads", type=int, default=1)
    sp = add("ess-trivial", cmd_ess_trivial, "is x y^w essentially trivial", machine=False)
    sp.add_argument("-x", default="")
    sp.add_argument("-y", required=True)
    sp = add("relations", cmd_relations, "bounded relation search")
    sp.add_argument("--max-len", type=int, required=True)
    sp.add_argument("--positive", action="store_true")
    sp.add_argument("--pairs", action="store_true")
    sp.add_argument("--include-trivial", action="store_true", help="also search over trivially acting states")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--limit", type=int, default=dynamics.DEFAULT_SECTION_LIMIT)
    sp = add("level-transitive", cmd_level_transitive, "transitivity of the dual on Q^k")
    sp.add_argument("--max-k", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10**6)
    sp = add("quotient-cayley", cmd_quotient_cayley, "Cayley graph of the level-k quotient")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10**5)
    fmt(sp)
    sp = add("g-regular", cmd_g_regular, "prefix driving a word into the sink")
    sp.add_argument("-w", required=True)
    sp.add_argument("--bound", type=int, default=16)
    sp = add("fragile", cmd_fragile, "fragility of a word")
    sp.add_argument("-w", required=True)
    sp = add("strongly-fragile", cmd_strongly_fragile, "strong fragility of a word", machine=False)
    sp.add_argument("-w", required=True)
    sp = add("commutators", cmd_commutators, "nested commutator words", machine=False)
    sp.add_argument("--gens", required=True)
    sp.add_argument("--bound", type=int, default=1)
    sp.add_argument("--all-orders", action="store_true")
    sp.add_argument("--sorted-by-length", type=int, metavar="N", help="buffer N words and sort them by length")
    sp.add_argument("--limit", type=int)
    sp = add("make", cmd_make, "build a machine from the zoo", machine=False)
    sp.add_argument("kind", choices=["sink", "sq", "cayley", "bicayley", "embed-sum"])
    sp.add_argument("machine", nargs="?", help="base machine for embed-sum")
    sp.add_argument("--alphabet")
    sp.add_argument("--states")
    sp.add_argument("--dual", action="store_true", help="for sq: emit the all-loop dual")
    sp.add_argument("--zn", type=int)
    sp.add_argument("--table", help="group table file or corpus:<name>")
    sp.add_argument("--subset", help="H for embed-sum (default: all states)")
    sp = add("corpus", cmd_corpus, "bundled machines", machine=False)
    sp.add_argument("action", choices=["list", "get"])
    sp.add_argument("name", nargs="?")
    return p


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_ERROR
    ctx = Context(args, out)
    try:
        return args.func(ctx)
    except UsageError as exc:
        print(f"agt {args.cmd}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (MachineError, words.WordError, ValueError, KeyError, OSError, dynamics.VerificationFailed) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"agt {args.cmd}: error: {msg}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
