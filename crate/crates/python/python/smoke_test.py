# SPDX-License-Identifier: Apache-2.0
"""Smoke test for the modfa extension module."""

import math

import modfa


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    p = 11
    ry = modfa.Automaton.two_state(p, 1, "plane")
    rz = modfa.Automaton.two_state(p, 1, "phase")
    for l in range(3 * p + 1):
        expected = math.cos(2 * math.pi * l / p) ** 2
        assert close(ry.acceptance(l), expected), l
        assert close(rz.acceptance(l), expected), l
    assert len(ry.trace(4)) == 6

    par = modfa.Automaton.parallel(p, [1, 2, 4, 8])
    assert close(par.acceptance(2 * p), 1.0)
    assert close(par.acceptance(3), modfa.parallel_interference_form(p, [1, 2, 4, 8], 3))

    c = modfa.compile(p, [3, 5, 7], "opt-rz", p)
    assert c.num_qubits == 3
    assert c.cost()["cx"] == 44
    assert close(c.acceptance(), 1.0)
    again = modfa.Circuit.parse(c.to_text())
    assert again.to_text() == c.to_text()

    single = modfa.compile(p, [1], "rz", 5)
    assert single.cost()["sx"] == 2

    noise = modfa.NoiseModel(depol_1q=0.01)
    f = modfa.fidelity(modfa.compile(p, [1], "ry", 4), noise)
    assert close(f, (1 + 0.99 ** 8) / 2)

    counts = modfa.sample(c, modfa.NoiseModel(), shots=1000, seed=3)
    assert counts == {"000": 1000}

    rows = modfa.sweep(p, [3, 5, 7], "opt-rz", 22, noise=noise, shots=512, seed=1)
    assert len(rows) == 23 and close(rows[11]["ideal_prob"], 1.0)
    csv = modfa.sweep_csv(p, [3, 5, 7], "opt-rz", 22, noise=noise, shots=512, seed=1)
    assert csv == modfa.sweep_csv(p, [3, 5, 7], "opt-rz", 22, noise=noise, shots=512, seed=1)

    ks, worst = modfa.search_k(p, 2)
    assert len(ks) == 2 and 0.0 <= worst <= 1.0

    try:
        modfa.Automaton.two_state(9, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("composite modulus accepted")

    print("modfa smoke test: ok")


if __name__ == "__main__":
    main()
