#!/usr/bin/env python3
"""Regenerates the disk edge-list goldens from the construction rules alone.

Level R holds 2^R nodes with ids 2^R - 1 + k at angle 2 pi k / 2^R. Each level
contributes its parent links (child, parent) and then its ring (k, k+1 mod 2^R);
a two-node ring is a single edge and the root has none.
"""
import math
import sys


def disk(depth):
    lines = [f"nodes {2 ** (depth + 1) - 1}"]
    for r in range(depth + 1):
        role = "boundary" if r == depth else "bulk"
        for k in range(2 ** r):
            theta = 2 * math.pi * k / 2 ** r
            lines.append(f"{2 ** r - 1 + k} {role} {r} {theta:.17g}")
    for r in range(1, depth + 1):
        n, first = 2 ** r, 2 ** r - 1
        for k in range(n):
            lines.append(f"{first + k} {2 ** (r - 1) - 1 + k // 2} 1")
        if n == 2:
            lines.append(f"{first} {first + 1} 1")
        else:
            for k in range(n):
                lines.append(f"{first + k} {first + (k + 1) % n} 1")
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "."
    for d in (3, 4):
        with open(f"{out}/disk{d}.edges", "w") as f:
            f.write(disk(d))
