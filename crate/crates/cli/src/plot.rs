//! matplotlib script rendering sweep CSVs as probability-versus-acceleration
//! panels, solid for the accelerated detector and dashed for the accelerated
//! cavity.

pub fn sweep_plot_script(default_csv: &str) -> String {
    TEMPLATE.replace(
        "@DEFAULT_CSV@",
        &default_csv.replace('\\', "\\\\").replace('\'', "\\'"),
    )
}

const TEMPLATE: &str = r##"#!/usr/bin/env python3
# Usage: python3 this_script.py [sweep.csv ...] [-o figure.pdf]
# Each CSV becomes one panel.
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def load(path):
    meta = {}
    with open(path) as f:
        lines = f.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].partition("=")
            meta[key.strip()] = value.strip()
        else:
            body.append(line)
    header = body[0].split(",")
    cols = {name: [] for name in header}
    for row in body[1:]:
        for name, value in zip(header, row.split(",")):
            cols[name].append(value)
    a = np.array(cols["a"], dtype=float)
    rob = np.array(cols["p_rob"], dtype=float)
    bob = np.array(cols["p_bob"], dtype=float)
    return meta, a, rob, bob


def main(argv):
    out = "sweep.pdf"
    if "-o" in argv:
        i = argv.index("-o")
        out = argv[i + 1]
        argv = argv[:i] + argv[i + 2 :]
    paths = argv or ['@DEFAULT_CSV@']
    fig, axes = plt.subplots(1, len(paths), figsize=(4.5 * len(paths), 3.6), squeeze=False)
    for ax, path in zip(axes[0], paths):
        meta, a, rob, bob = load(path)
        ax.plot(a, rob, "-", color="k", label="accelerated detector")
        ax.plot(a, bob, "--", color="k", label="accelerated cavity")
        panel = meta.get("panel", "none")
        title = "m = {}, {}".format(meta.get("m", "?"), meta.get("mode", "?"))
        if panel != "none":
            title = "({}) ".format(panel) + title
        ax.set_title(title)
        ax.set_xlabel("a")
        ax.set_ylabel("P (arb. units)")
        ax.set_xscale("log")
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(out)
    print("wrote", out)


if __name__ == "__main__":
    main(sys.argv[1:])
"##;
