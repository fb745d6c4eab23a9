"""Acceptance suite: one test per criterion, one printed line each.

Criteria 1, 2, and 4 compare against the published worked-example
figures.  The subset of those figures produced after the first
two-sided round depends on the SVD phase gauge of the first-round
factors, which is a free choice no published convention pins down; the
assertions are kept verbatim regardless, so a gauge mismatch shows up
here as an honest failure rather than a loosened test (details in the
repository notes).
"""

import json
import subprocess
import sys

import numpy as np

from qhosvd import (QMatrix, QTensor, Quaternion, TruncationSpec,
                    error_report, fro_norm, kron, l_qhosvd, lmode_product,
                    matmul, qconj, qmodulus, qmul, qsvd, r_qhosvd,
                    reconstruct, reference_tensor, residual_tensors,
                    rmode_product, run_paper_examples, ts_qhosvd, unfold,
                    unitarity_defect)
from qhosvd.verify import (EXAMPLE1_CONTROL_COMPONENTS, EXAMPLE1_MODE_NORMS,
                           EXAMPLE2_RANKS, EXAMPLE2_SQ_ERROR,
                           EXAMPLE2_TAIL_BOUND, EXAMPLE2_THIRD_SIGMAS)

from conftest import (jacobi_eigen_sigma, oracle_lmode, oracle_rmode,
                      rand_qmatrix, rand_qtensor, rand_quaternion,
                      rand_unitary)


def _criterion(num, desc, failures):
    status = "PASS" if not failures else "FAIL"
    print(f"ACCEPTANCE {num:02d} {status}: {desc}")
    for f in failures:
        print(f"    - {f}")
    assert not failures, f"criterion {num} ({desc}): " + " | ".join(failures)


def _subtensor_norms(core, k):
    M = unfold(core, k, "left")
    return np.sqrt((np.abs(M.a) ** 2 + np.abs(M.b) ** 2).sum(axis=1))


def _gram(core, k, side):
    M = unfold(core, k, "left")
    if side == "left":
        return matmul(M, M.hermitian())
    R = unfold(core, k, "right")
    return matmul(R.hermitian(), R)


def _off_mods(G):
    mods = np.sqrt(np.abs(G.a) ** 2 + np.abs(G.b) ** 2)
    np.fill_diagonal(mods, 0.0)
    return mods


def test_criterion_01_example1_ordering():
    T = reference_tensor()
    D = ts_qhosvd(T)
    failures = []
    for k, expected in EXAMPLE1_MODE_NORMS.items():
        norms = _subtensor_norms(D.core, k)
        for alpha, (got, want) in enumerate(zip(norms, expected), start=1):
            if abs(got - want) > 5e-3:
                failures.append(
                    f"mode {k} norm {alpha}: {got:.4f} vs published {want:.4f}")
    _criterion(1, "worked-example core subtensor norms (12 values, 5e-3)", failures)


def test_criterion_02_example1_orthogonality():
    T = reference_tensor()
    D = ts_qhosvd(T)
    S = D.core
    scale = S.frobenius_norm() ** 2
    failures = []
    for k, side in ((1, "left"), (4, "right")):
        worst = _off_mods(_gram(S, k, side)).max()
        if worst > 1e-9 * scale:
            failures.append(f"mode {k} {side} inner products not zero: {worst:.3e}")
    for (k, side), pairs in EXAMPLE1_CONTROL_COMPONENTS.items():
        for (a, b), comps in pairs.items():
            want = float(np.sqrt(sum(c * c for c in comps)))
            got = _gram(S, k, side)[a - 1, b - 1].modulus()
            if got <= 1e-9 * scale:
                failures.append(f"mode {k} {side} ({a},{b}) unexpectedly zero")
            if abs(got - want) > 0.05 * want:
                failures.append(
                    f"mode {k} {side} ({a},{b}) modulus {got:.4f} vs published {want:.4f}")
    _criterion(2, "worked-example orthogonality + nonzero controls", failures)


def test_criterion_03_example1_weak_orthogonality():
    T = reference_tensor()
    D = ts_qhosvd(T)
    S = D.core
    scale = S.frobenius_norm() ** 2
    failures = []
    for k in range(1, 5):
        for side in ("left", "right"):
            re = np.abs(_gram(S, k, side).a.real.copy())
            np.fill_diagonal(re, 0.0)
            worst = re.max()
            if worst > 1e-9 * scale:
                failures.append(f"mode {k} {side} real part {worst:.3e}")
    _criterion(3, "worked-example weak orthogonality, all modes both sides", failures)


def test_criterion_04_example2_truncation():
    T = reference_tensor()
    spec = TruncationSpec(ranks=EXAMPLE2_RANKS)
    D = ts_qhosvd(T, spec)
    rep = error_report(T, D)
    failures = []
    for k, want in enumerate(EXAMPLE2_THIRD_SIGMAS, start=1):
        got = D.spectrum(k).sigma[2]
        if abs(got - want) > 5e-3:
            failures.append(f"mode {k} third singular value {got:.4f} vs {want:.4f}")
    if abs(rep.tail_bound - EXAMPLE2_TAIL_BOUND) > 1e-2:
        failures.append(f"tail bound {rep.tail_bound:.4f} vs {EXAMPLE2_TAIL_BOUND}")
    if abs(rep.sq_error - EXAMPLE2_SQ_ERROR) > 5e-2:
        failures.append(f"squared error {rep.sq_error:.4f} vs {EXAMPLE2_SQ_ERROR}")
    if rep.sq_error > rep.tail_bound * (1 + 1e-8):
        failures.append("squared error exceeds the tail bound")
    _criterion(4, "worked-example rank-(2,2,2,2) truncation figures", failures)


def test_criterion_05_error_identity_random_battery():
    rng = np.random.default_rng(205)
    failures = []
    for i in range(20):
        dims = tuple(int(d) for d in rng.integers(2, 7, size=4))
        T = rand_qtensor(rng, dims)
        ranks = tuple(max(1, d // 2) for d in dims)
        spec = TruncationSpec(ranks=ranks)
        D = ts_qhosvd(T, spec)
        sq = (T - reconstruct(D)).frobenius_norm() ** 2
        total = 0.0
        for rnd in residual_tensors(T, spec):
            total += fro_norm(rnd.e_left) ** 2
            total += fro_norm(lmode_product(rnd.u_hat.hermitian(),
                                            rnd.left_mode, rnd.e_right)) ** 2
        if abs(sq - total) > 1e-8 * max(sq, 1e-300):
            failures.append(f"case {i} dims {dims}: {sq:.6e} vs {total:.6e}")
    _criterion(5, "residual-sum error identity on 20 random order-4 tensors", failures)


def test_criterion_06_one_sided_error_equalities():
    rng = np.random.default_rng(206)
    failures = []
    for i in range(20):
        dims = tuple(int(d) for d in rng.integers(2, 7, size=4))
        T = rand_qtensor(rng, dims)
        ranks = tuple(max(1, d // 2) for d in dims)
        spec = TruncationSpec(ranks=ranks)
        for name, fn in (("l", l_qhosvd), ("r", r_qhosvd)):
            rep = error_report(T, fn(T, spec))
            if abs(rep.sq_error - rep.tail_bound) > 1e-8 * max(rep.tail_bound, 1e-300):
                failures.append(
                    f"case {i} {name}: sq {rep.sq_error:.6e} vs tail {rep.tail_bound:.6e}")
    _criterion(6, "one-sided truncation error equals tail energy (20 cases)", failures)


def test_criterion_07_order2_reduction():
    rng = np.random.default_rng(207)
    failures = []
    for i in range(20):
        m, n = (int(d) for d in rng.integers(2, 8, size=2))
        T = rand_qtensor(rng, (m, n))
        D = ts_qhosvd(T)
        res = qsvd(T.as_matrix())
        core = D.core.components
        k = min(m, n)
        diag = np.array([core[c, c, 0] for c in range(k)])
        scale = max(res.sigma[0], 1e-300)
        if np.abs(diag - res.sigma[:k]).max() > 1e-9 * scale:
            failures.append(f"case {i}: diagonal differs from the matrix SVD")
        if np.any(np.diff(diag) > 1e-9 * scale) or np.any(diag < -1e-12 * scale):
            failures.append(f"case {i}: diagonal not nonnegative descending")
        off = core.copy()
        for c in range(k):
            off[c, c, :] = 0.0
        if np.abs(off).max() > 1e-10 * scale:
            failures.append(f"case {i}: core not diagonal")
        imag = max(np.abs(core[c, c, 1:]).max() for c in range(k))
        if imag > 1e-10 * scale:
            failures.append(f"case {i}: diagonal not real")
    _criterion(7, "order-2 two-sided decomposition reduces to the matrix SVD", failures)


def _check(failures, cond, msg):
    if not cond:
        failures.append(msg)


def test_criterion_08_algebraic_identity_battery():
    rng = np.random.default_rng(208)
    failures = []

    # scalar algebra
    for i in range(50):
        p, q, r = (rand_quaternion(rng) for _ in range(3))
        lhs = qmul(qmul(p, q), r)
        rhs = qmul(p, qmul(q, r))
        _check(failures, (lhs - rhs).modulus() <= 1e-14 * max(1.0, lhs.modulus()),
               f"scalar associativity case {i}")
        lhs = qconj(qmul(p, q))
        rhs = qmul(qconj(q), qconj(p))
        _check(failures, (lhs - rhs).modulus() <= 1e-14 * max(1.0, lhs.modulus()),
               f"scalar conjugation case {i}")
        prod = qmul(q, qconj(q))
        _check(failures,
               abs(prod.w - qmodulus(q) ** 2) <= 1e-12 * max(1.0, prod.w)
               and max(abs(prod.x), abs(prod.y), abs(prod.z)) <= 1e-15 * max(1.0, prod.w),
               f"scalar modulus identity case {i}")
    i_unit = Quaternion(0, 1, 0, 0)
    j_unit = Quaternion(0, 0, 1, 0)
    _check(failures, qmul(i_unit, j_unit) != qmul(j_unit, i_unit),
           "noncommutativity witness")

    # matrix identities
    for i in range(50):
        A = rand_qmatrix(rng, 3, 4)
        B = rand_qmatrix(rng, 4, 3)
        lhs = matmul(A, B).hermitian()
        rhs = matmul(B.hermitian(), A.hermitian())
        _check(failures,
               (lhs - rhs).frobenius_norm() <= 1e-13 * max(1.0, lhs.frobenius_norm()),
               f"adjoint reversal case {i}")
        bad_t = (matmul(A, B).transpose()
                 - matmul(B.transpose(), A.transpose())).frobenius_norm()
        bad_c = (matmul(A, B).conj()
                 - matmul(A.conj(), B.conj())).frobenius_norm()
        _check(failures, bad_t > 1e-6 and bad_c > 1e-6,
               f"generic transpose/conjugate witness case {i}")
        lhs = matmul(A, B).real
        rhs = matmul(A.conj(), B.conj()).real
        _check(failures, np.abs(lhs - rhs).max() <= 1e-13 * max(1.0, np.abs(lhs).max()),
               f"real-part identity case {i}")
        P = QMatrix.from_real(rng.standard_normal((3, 4)))
        lhs = matmul(P, B).transpose()
        rhs = matmul(B.transpose(), P.transpose())
        _check(failures,
               (lhs - rhs).frobenius_norm() <= 1e-13 * max(1.0, lhs.frobenius_norm()),
               f"real-factor transpose case {i}")
        chi_lhs = matmul(A, B).chi()
        chi_rhs = A.chi() @ B.chi()
        _check(failures,
               np.abs(chi_lhs - chi_rhs).max() <= 1e-13 * max(1.0, np.abs(chi_lhs).max()),
               f"embedding homomorphism case {i}")
        U = rand_unitary(rng, 3)
        V = rand_unitary(rng, 2)
        _check(failures, unitarity_defect(kron(U, V)) <= 1e-10 * 6,
               f"kron unitarity case {i}")
        R = rng.standard_normal((4, 3))
        got = qsvd(QMatrix.from_real(R)).sigma
        ref = jacobi_eigen_sigma(R)[:3]
        _check(failures, np.abs(got - ref).max() <= 1e-10 * max(1.0, ref[0]),
               f"real-matrix SVD oracle case {i}")

    # tensor product and unfolding identities
    for i in range(50):
        dims = tuple(int(d) for d in rng.integers(2, 5, size=3))
        T = rand_qtensor(rng, dims)
        U1 = rand_qmatrix(rng, 2, dims[0])
        V3 = rand_qmatrix(rng, dims[2], 2)
        a = lmode_product(U1, 1, rmode_product(T, 3, V3))
        b = rmode_product(lmode_product(U1, 1, T), 3, V3)
        _check(failures,
               (a - b).frobenius_norm() <= 1e-13 * max(1.0, a.frobenius_norm()),
               f"left/right commutation case {i}")
        W1 = rand_qmatrix(rng, dims[0], dims[0])
        W2 = rand_qmatrix(rng, dims[0], dims[0])
        collapsed = lmode_product(matmul(W2, W1), 1, T)
        stacked = lmode_product(W2, 1, lmode_product(W1, 1, T))
        _check(failures,
               (collapsed - stacked).frobenius_norm()
               <= 1e-13 * max(1.0, collapsed.frobenius_norm()),
               f"same-mode left collapse case {i}")
        Z1 = rand_qmatrix(rng, dims[1], dims[1])
        Z2 = rand_qmatrix(rng, dims[1], dims[1])
        collapsed = rmode_product(T, 2, matmul(Z1, Z2))
        stacked = rmode_product(rmode_product(T, 2, Z1), 2, Z2)
        _check(failures,
               (collapsed - stacked).frobenius_norm()
               <= 1e-13 * max(1.0, collapsed.frobenius_norm()),
               f"same-mode right collapse case {i}")
        A1 = rand_qmatrix(rng, dims[0], dims[0])
        A2 = rand_qmatrix(rng, dims[1], dims[1])
        swapped = (lmode_product(A2, 2, lmode_product(A1, 1, T))
                   - lmode_product(A1, 1, lmode_product(A2, 2, T))).frobenius_norm()
        _check(failures, swapped > 1e-6,
               f"cross-mode order witness case {i}")
        k = int(rng.integers(1, 4))
        U = rand_qmatrix(rng, 3, dims[k - 1])
        Y = lmode_product(U, k, T)
        lhs = unfold(Y, k, "left")
        rhs = matmul(U, unfold(T, k, "left"))
        _check(failures,
               (lhs - rhs).frobenius_norm() <= 1e-13 * max(1.0, rhs.frobenius_norm()),
               f"left unfolding identity case {i}")
        V = rand_qmatrix(rng, dims[k - 1], 3)
        Y = rmode_product(T, k, V)
        lhs = unfold(Y, k, "right")
        rhs = matmul(unfold(T, k, "right"), V)
        _check(failures,
               (lhs - rhs).frobenius_norm() <= 1e-13 * max(1.0, rhs.frobenius_norm()),
               f"right unfolding identity case {i}")
        # Kronecker-chain unfolding identities, modes 1..2 transformed, j = 3
        W1 = rand_qmatrix(rng, dims[0], dims[0])
        W2 = rand_qmatrix(rng, dims[1], dims[1])
        Y = lmode_product(W2, 2, lmode_product(W1, 1, T))
        H = kron(W2, W1)
        lhs = unfold(Y, 3, "left")
        rhs = matmul(H, unfold(T, 3, "left").transpose()).transpose()
        _check(failures,
               (lhs - rhs).frobenius_norm() <= 1e-12 * max(1.0, rhs.frobenius_norm()),
               f"left Kronecker unfolding case {i}")
        Z2 = rand_qmatrix(rng, dims[1], dims[1])
        Z3 = rand_qmatrix(rng, dims[2], dims[2])
        Y = rmode_product(rmode_product(T, 3, Z3), 2, Z2)
        G = kron(Z3, Z2)
        lhs = unfold(Y, 1, "right")
        rhs = matmul(unfold(T, 1, "right").transpose(), G).transpose()
        _check(failures,
               (lhs - rhs).frobenius_norm() <= 1e-12 * max(1.0, rhs.frobenius_norm()),
               f"right Kronecker unfolding case {i}")

    # norm identities for semi-orthogonal factors
    for i in range(50):
        S = rand_qtensor(rng, (2, 3, 2))
        Uhat = rand_unitary(rng, 4)[:, :2]
        lifted = lmode_product(Uhat, 1, S)
        _check(failures,
               abs(fro_norm(lifted) - fro_norm(S)) <= 1e-12 * fro_norm(S),
               f"left isometry norm case {i}")
        _check(failures,
               fro_norm(rmode_product(S, 2, rand_unitary(rng, 3)[:, :2]))
               <= fro_norm(S) * (1 + 1e-12),
               f"right contraction norm case {i}")
        T4 = rand_qtensor(rng, (4, 2, 2))
        _check(failures,
               fro_norm(lmode_product(Uhat.hermitian(), 1, T4))
               <= fro_norm(T4) * (1 + 1e-12),
               f"left contraction norm case {i}")

    _criterion(8, "algebraic identity battery (50 instances per identity)", failures)


def test_criterion_09_svd_quality_gates():
    rng = np.random.default_rng(209)
    failures = []
    sizes = [(2, 2), (5, 3), (3, 9), (12, 12), (25, 40), (40, 60)]
    for i, (m, n) in enumerate(sizes * 3):
        A = rand_qmatrix(rng, m, n)
        res = qsvd(A)
        du = unitarity_defect(res.U)
        dv = unitarity_defect(res.V)
        rec = (res.reconstruct() - A).frobenius_norm() / A.frobenius_norm()
        _check(failures, du <= 1e-10 * m, f"{m}x{n} case {i}: U defect {du:.2e}")
        _check(failures, dv <= 1e-10 * n, f"{m}x{n} case {i}: V defect {dv:.2e}")
        _check(failures, rec <= 1e-10, f"{m}x{n} case {i}: reconstruction {rec:.2e}")
        P = rand_qmatrix(rng, 3, m)
        chi_lhs = matmul(P, A).chi()
        chi_rhs = P.chi() @ A.chi()
        _check(failures,
               np.abs(chi_lhs - chi_rhs).max() <= 1e-13 * max(1.0, np.abs(chi_lhs).max()),
               f"{m}x{n} case {i}: homomorphism")
        _check(failures,
               np.abs(A.hermitian().chi() - A.chi().conj().T).max() <= 1e-13,
               f"{m}x{n} case {i}: adjoint homomorphism")
    _criterion(9, "quaternion SVD quality gates up to 40x60", failures)


def test_criterion_10_cli_thread_determinism():
    cmd = [sys.executable, "-m", "qhosvd.cli", "verify", "--random",
           "--seed", "7", "--report", "json"]
    r1 = subprocess.run(cmd + ["--threads", "1"], capture_output=True, text=True)
    r2 = subprocess.run(cmd + ["--threads", "4"], capture_output=True, text=True)
    failures = []
    _check(failures, r1.returncode == 0, f"threads=1 exit {r1.returncode}")
    _check(failures, r2.returncode == 0, f"threads=4 exit {r2.returncode}")
    _check(failures, r1.stdout == r2.stdout, "JSON reports differ across --threads")
    _check(failures, len(r1.stdout.splitlines()) > 0, "no reports emitted")
    _criterion(10, "verify --random --seed 7 is thread-count invariant", failures)
