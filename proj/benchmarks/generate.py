#!/usr/bin/env python3
"""Regenerates the bundled bench fixtures.

Structured circuits (adder, multiplier, ALU, comparator) are written with
two-input gates only; the random circuits use a fixed seed so the output is
stable across runs.
"""
import random
import sys
from pathlib import Path


class Circuit:
    def __init__(self, name):
        self.name = name
        self.inputs = []
        self.outputs = []
        self.lines = []
        self.counter = 0

    def inp(self, name):
        self.inputs.append(name)
        return name

    def gate(self, func, *args, name=None):
        if name is None:
            self.counter += 1
            name = f"n{self.counter}"
        self.lines.append(f"{name} = {func}({', '.join(args)})")
        return name

    def out(self, name):
        self.outputs.append(name)

    def text(self, comment):
        rows = [f"# {self.name}", f"# {comment}"]
        rows += [f"INPUT({i})" for i in self.inputs]
        rows += [f"OUTPUT({o})" for o in self.outputs]
        rows += self.lines
        return "\n".join(rows) + "\n"


def full_adder(c, a, b, cin):
    p = c.gate("XOR", a, b)
    s = c.gate("XOR", p, cin)
    g = c.gate("AND", a, b)
    t = c.gate("AND", p, cin)
    co = c.gate("OR", g, t)
    return s, co, p


def half_adder(c, a, b):
    return c.gate("XOR", a, b), c.gate("AND", a, b)


def mux2(c, sel_n, sel, x0, x1):
    l = c.gate("AND", sel_n, x0)
    r = c.gate("AND", sel, x1)
    return c.gate("OR", l, r)


def c17():
    c = Circuit("c17")
    for i in ("1", "2", "3", "6", "7"):
        c.inp(i)
    c.gate("NAND", "1", "3", name="10")
    c.gate("NAND", "3", "6", name="11")
    c.gate("NAND", "2", "11", name="16")
    c.gate("NAND", "11", "7", name="19")
    c.gate("NAND", "10", "16", name="22")
    c.gate("NAND", "16", "19", name="23")
    c.out("22")
    c.out("23")
    return c.text("ISCAS-85 c17")


def add8():
    c = Circuit("add8")
    a = [c.inp(f"a{i}") for i in range(8)]
    b = [c.inp(f"b{i}") for i in range(8)]
    carry = c.inp("cin")
    for i in range(8):
        s, carry, _ = full_adder(c, a[i], b[i], carry)
        c.out(s)
    c.out(carry)
    return c.text("8-bit ripple-carry adder")


def mul4():
    c = Circuit("mul4")
    a = [c.inp(f"a{i}") for i in range(4)]
    b = [c.inp(f"b{i}") for i in range(4)]
    pp = [[c.gate("AND", a[i], b[j]) for i in range(4)] for j in range(4)]
    # acc holds bits of the running sum starting at weight j
    acc = pp[0][:]
    result = []
    for j in range(1, 4):
        result.append(acc[0])
        upper = acc[1:]
        row = pp[j]
        nxt = []
        carry = None
        for i in range(4):
            x = upper[i] if i < len(upper) else None
            y = row[i]
            if x is None and carry is None:
                nxt.append(y)
            elif x is None:
                s, carry = half_adder(c, y, carry)
                nxt.append(s)
            elif carry is None:
                s, carry = half_adder(c, x, y)
                nxt.append(s)
            else:
                s, carry, _ = full_adder(c, x, y, carry)
                nxt.append(s)
        nxt.append(carry)
        acc = nxt
    result += acc
    for r in result:
        c.out(r)
    return c.text("4x4 array multiplier")


def alu4():
    c = Circuit("alu4")
    a = [c.inp(f"a{i}") for i in range(4)]
    b = [c.inp(f"b{i}") for i in range(4)]
    op0 = c.inp("op0")
    op1 = c.inp("op1")
    carry = c.inp("cin")
    op0n = c.gate("NOT", op0)
    op1n = c.gate("NOT", op1)
    for i in range(4):
        s, carry, p = full_adder(c, a[i], b[i], carry)
        land = c.gate("AND", a[i], b[i])
        lor = c.gate("OR", a[i], b[i])
        lo = mux2(c, op0n, op0, s, land)
        hi = mux2(c, op0n, op0, lor, p)
        c.out(mux2(c, op1n, op1, lo, hi))
    isadd = c.gate("NOR", op0, op1)
    c.out(c.gate("AND", carry, isadd))
    return c.text("4-bit ALU: add/and/or/xor")


def cmp8():
    c = Circuit("cmp8")
    a = [c.inp(f"a{i}") for i in range(8)]
    b = [c.inp(f"b{i}") for i in range(8)]
    gt = None
    eq = None
    for i in reversed(range(8)):
        bn = c.gate("NOT", b[i])
        an = c.gate("NOT", a[i])
        g = c.gate("AND", a[i], bn)
        l = c.gate("AND", an, b[i])
        e = c.gate("XNOR", a[i], b[i])
        if gt is None:
            gt, eq, lt = g, e, l
        else:
            gt = c.gate("OR", gt, c.gate("AND", eq, g))
            lt = c.gate("OR", lt, c.gate("AND", eq, l))
            eq = c.gate("AND", eq, e)
    c.out(gt)
    c.out(eq)
    c.out(lt)
    return c.text("8-bit magnitude comparator")


def random_circuit(name, n_in, n_gates, n_out, seed, funcs, weights, window=24):
    rng = random.Random(seed)
    c = Circuit(name)
    nets = [c.inp(f"i{k}") for k in range(n_in)]
    fanout = {n: 0 for n in nets}
    for _ in range(n_gates):
        func = rng.choices(funcs, weights)[0]
        arity = 1 if func in ("NOT", "BUFF") else 2
        pool = nets[-window:]
        unused = [n for n in pool if fanout[n] == 0]
        args = []
        while len(args) < arity:
            if unused and rng.random() < 0.4:
                pick = rng.choice(unused)
            elif rng.random() < 0.8:
                pick = rng.choice(pool)
            else:
                pick = rng.choice(nets)
            if pick not in args:
                args.append(pick)
                if pick in unused:
                    unused.remove(pick)
        out = c.gate(func, *args)
        for x in args:
            fanout[x] += 1
        nets.append(out)
        fanout[out] = 0
    sinks = [n for n in nets[n_in:] if fanout[n] == 0]
    others = [n for n in nets[n_in:] if fanout[n] > 0]
    extra = rng.sample(others, max(0, n_out - len(sinks)))
    for n in nets[n_in:]:
        if n in sinks or n in extra:
            c.out(n)
    return c.text(f"random circuit, seed {seed}")


MIXED = (["AND", "NAND", "OR", "NOR", "XOR", "XNOR", "NOT", "BUFF"],
         [3, 4, 3, 3, 1, 1, 2, 1])
NNX = (["NAND", "NOR", "XOR"], [5, 3, 1])


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent
    files = {
        "c17.bench": c17(),
        "add8.bench": add8(),
        "mul4.bench": mul4(),
        "alu4.bench": alu4(),
        "cmp8.bench": cmp8(),
        "rnd300.bench": random_circuit("rnd300", 16, 260, 12, 300, *MIXED),
        "nnx200.bench": random_circuit("nnx200", 14, 200, 10, 200, *NNX),
        "rnd600.bench": random_circuit("rnd600", 32, 600, 24, 600, *MIXED),
        "rnd2000.bench": random_circuit("rnd2000", 64, 2000, 64, 2000, *MIXED),
    }
    for fname, text in files.items():
        (out / fname).write_text(text)


if __name__ == "__main__":
    main()
