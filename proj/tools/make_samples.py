#!/usr/bin/env python3
"""Write the synthetic sample images used in the README to data/*.tpv."""
import argparse
import pathlib


def write_tpv(path, nx, ny, values):
    h = 1.0 / max(nx, ny)
    with open(path, "w") as f:
        f.write("TPIVOX 1\nndim 2\n")
        f.write(f"dims {nx} {ny}\nspacing {h!r} {h!r}\ntype u8\nencoding ascii\ndata\n")
        for y in range(ny):
            f.write(" ".join(str(round(255 * values[x + nx * y])) for x in range(nx)) + "\n")


def fill(v, nx, x0, x1, y0, y1, g):
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            v[x + nx * y] = g


def bridge_and_channel():
    n = 35
    v = [0.0] * (n * n)
    fill(v, n, 3, 12, 4, 16, 1.0)
    fill(v, n, 3, 12, 20, 30, 1.0)
    fill(v, n, 7, 7, 17, 19, 0.7)
    fill(v, n, 20, 31, 8, 26, 1.0)
    fill(v, n, 24, 26, 15, 17, 0.0)
    fill(v, n, 27, 31, 16, 16, 0.3)
    return n, n, v


def bridged_frame():
    n = 32
    v = [0.0] * (n * n)
    fill(v, n, 0, 31, 0, 3, 1.0)
    fill(v, n, 0, 31, 28, 31, 1.0)
    fill(v, n, 22, 27, 4, 27, 1.0)
    fill(v, n, 4, 9, 4, 13, 1.0)
    fill(v, n, 4, 9, 17, 27, 1.0)
    fill(v, n, 6, 6, 14, 16, 0.7)
    return n, n, v


def two_branches():
    n = 32
    v = [0.0] * (n * n)
    fill(v, n, 12, 19, 0, 9, 1.0)
    fill(v, n, 4, 27, 10, 15, 1.0)
    fill(v, n, 4, 9, 16, 19, 1.0)
    fill(v, n, 4, 9, 23, 31, 1.0)
    fill(v, n, 6, 6, 20, 22, 0.7)
    fill(v, n, 22, 27, 16, 31, 1.0)
    return n, n, v


def disk():
    n = 24
    v = [0.0] * (n * n)
    for y in range(n):
        for x in range(n):
            dx, dy = x + 0.5 - n / 2, y + 0.5 - n / 2
            if dx * dx + dy * dy < 64.0:
                v[x + n * y] = 1.0
    return n, n, v


SAMPLES = {
    "bridge_and_channel": bridge_and_channel,
    "bridged_frame": bridged_frame,
    "two_branches": two_branches,
    "disk": disk,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("output_dir", nargs="?", default="data")
    args = ap.parse_args()
    out = pathlib.Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in SAMPLES.items():
        write_tpv(out / f"{name}.tpv", *make())


if __name__ == "__main__":
    main()
