#!/usr/bin/env python3
"""Small standalone DIMACS CNF solver with SAT-competition style output.

Usage: mini_solver.py FILE.cnf

Plain depth-first DPLL over simplified clause lists; deliberately written
without any dependency on the plotting_solver package so it can serve as an
independent external solver for differential tests. Fine for the desk-scale
formulas this project produces; not meant for serious workloads.
"""

import sys


def parse(path):
    nvars = 0
    clauses = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line[0] in "c%":
                continue
            if line[0] == "p":
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise SystemExit(f"bad problem line: {line}")
                nvars = int(parts[2])
                continue
            lits = [int(tok) for tok in line.split()]
            if lits and lits[-1] == 0:
                lits.pop()
            if not lits:
                raise SystemExit("empty clause in input")
            clauses.append(lits)
    return nvars, clauses


def simplify(clauses, assign):
    """Apply assignment and propagate units; None on conflict."""
    while True:
        new = []
        unit = None
        for cl in clauses:
            kept = []
            satisfied = False
            for lit in cl:
                var = lit if lit > 0 else -lit
                if var in assign:
                    if assign[var] == (lit > 0):
                        satisfied = True
                        break
                else:
                    kept.append(lit)
            if satisfied:
                continue
            if not kept:
                return None
            if len(kept) == 1 and unit is None:
                unit = kept[0]
            new.append(kept)
        if unit is None:
            return new
        assign[unit if unit > 0 else -unit] = unit > 0
        clauses = new


def solve(nvars, clauses):
    stack = [(dict(), clauses)]
    while stack:
        assign, cls = stack.pop()
        assign = dict(assign)
        cls = simplify(cls, assign)
        if cls is None:
            continue
        if not cls:
            return assign
        lit = cls[0][0]
        var = lit if lit > 0 else -lit
        low = dict(assign)
        low[var] = False
        high = dict(assign)
        high[var] = True
        stack.append((low, cls))
        stack.append((high, cls))
    return None


def main():
    if len(sys.argv) != 2:
        print("usage: mini_solver.py FILE.cnf", file=sys.stderr)
        return 1
    nvars, clauses = parse(sys.argv[1])
    model = solve(nvars, clauses)
    if model is None:
        print("s UNSATISFIABLE")
        return 20
    print("s SATISFIABLE")
    lits = [v if model.get(v, False) else -v for v in range(1, nvars + 1)]
    for i in range(0, len(lits), 20):
        print("v " + " ".join(str(x) for x in lits[i : i + 20]))
    print("v 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())
