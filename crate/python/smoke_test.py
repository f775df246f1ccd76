"""Smoke test for the genoq extension module.

Build first with `cargo build -p genoq-py --release` (or install with
`maturin develop -m crates/py/Cargo.toml`), then run this file.
"""

import importlib.util
import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import genoq  # installed wheel
        return genoq
    except ImportError:
        pass
    for profile in ("release", "debug"):
        built = ROOT / "target" / profile / "libgenoq.so"
        if built.exists():
            dest = pathlib.Path(tempfile.mkdtemp()) / "genoq.so"
            shutil.copy(built, dest)
            spec = importlib.util.spec_from_file_location("genoq", dest)
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("libgenoq.so not found; run `cargo build -p genoq-py` first")


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    g = load()

    s = g.Statevector.zero(2)
    assert s.n_qubits == 2 and len(s) == 4
    assert all(close(p, 0.5) for p in g.Statevector.basis(1, 0).qft().probabilities())
    amps = g.Statevector([1 / math.sqrt(2), 1j / math.sqrt(2)]).amplitudes()
    assert close(amps[1], 1j / math.sqrt(2))
    roundtrip = g.Statevector.from_json(s.to_json())
    assert roundtrip == s

    h = g.Statevector.basis(1, 0).qft()
    assert h.sample(1024, 7) == h.sample(1024, 7)

    a = g.amplitude_encode([3.0, 4.0])
    assert all(close(x, y) for x, y in zip(a.amplitudes(), [0.6, 0.8]))
    assert g.angle_embed("ATG").probabilities()[3] > 1 - 1e-12
    assert len(g.pauli_feature_map("ACG")) == 8
    assert len(g.pauli_feature_map(x=[0.1, 0.2], reps=1)) == 4

    book = g.huffman("CAGGAAACAGCTATGACC")
    assert book["total_bits"] == 36 and book["state"] is None
    assert g.huffman("CAGGAAACAGCTATGACC", classic=True)["total_bits"] == 35

    t, k = g.bwt("ACTGACGTAGC")
    assert (t, k) == ("CG$TGAATACGC", 2)
    assert g.ibwt(t, k) == "ACTGACGTAGC"
    q = g.qbwt("ACGT", shots=256, seed=1)
    assert sum(q["counts"].values()) == 256

    f = g.dct2d(1, 1, [200.0])
    assert f[0][0] == 25.0
    assert g.cosine_encode_image(2, 2, [10, 20, 30, 40]).n_qubits == 2
    assert g.cosine_encode_dna("ATC").n_qubits == 3

    report, state = g.sencode("ATCG")
    assert report["k"] == 2
    assert all(close(x, y) for x, y in zip(state.amplitudes(), [0.5, -0.5, 0.5, -0.5]))

    budget, state = g.nz22("ACGT", "ACGT")
    assert budget["n"] == 1 and close(state.probabilities()[0], 1.0)
    budget, _ = g.nz23("TACAGTTGCA", "AGCTGACTCA")
    assert abs(budget["divergence"] - 0.0102) < 5e-4
    diag, _ = g.quantig("AAATTTTCCG", "AAAATTCCGG")
    assert all(close(x, y, 1e-9) for x, y in zip(diag, [25 / 3, 25, 50, 12.5]))

    assert g.shannon_entropy("ACGT") == 2.0
    assert g.divergence("kl", "ACGT", "ACGT") == 0.0

    out = g.qoltz_train(["AAGT"] * 8, steps=50, seed=3)
    assert out["model"]["n"] == 4 and out["trace"][0]["step"] == 0

    assert all(r["passed"] for r in g.run_verify(only="bwt"))

    for bad in (lambda: g.angle_embed("ACGN"), lambda: g.ibwt("ACG", 0), lambda: g.qoltz_train(["A"], bogus=1)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    g.set_qubit_cap(4)
    try:
        g.angle_embed("ACGTA")
    except g.CapacityError:
        pass
    else:
        raise AssertionError("expected CapacityError")
    g.set_qubit_cap(24)

    print("python smoke test ok")


if __name__ == "__main__":
    main()
