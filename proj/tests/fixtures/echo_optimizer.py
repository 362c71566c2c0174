#!/usr/bin/env python3
# Asks for the centre of the box until the budget is spent.
import sys


def main():
    head = sys.stdin.readline().split()
    d, budget = int(head[1]), int(head[2])
    lb = [float(v) for v in head[4:4 + d]]
    ub = [float(v) for v in head[4 + d:4 + 2 * d]]
    x = " ".join(repr((a + b) / 2) for a, b in zip(lb, ub))
    for _ in range(budget):
        print("ASK " + x, flush=True)
        if not sys.stdin.readline().startswith("TELL"):
            return 1
    stop = sys.stdin.readline().strip()
    print("DONE", flush=True)
    return 0 if stop == "STOP" else 1


sys.exit(main())
