"""Smoke tests for the python module: the bindings expose the core
operations and agree with straightforward numpy reimplementations."""

import numpy as np
import pytest

import minvar as mv


def test_moons_shapes_and_balance():
    data = mv.make_moons(1000, 0.1, 3)
    pts = np.asarray(data.points)
    assert pts.shape == (1000, 2)
    assert len(data) == 1000
    moons = np.asarray(data.moon)
    assert (moons == 0).sum() == 500
    counts = np.bincount(np.asarray(data.quadrant), minlength=4)
    assert counts.min() > 150
    again = mv.make_moons(1000, 0.1, 3)
    np.testing.assert_array_equal(pts, np.asarray(again.points))


def test_rng_moments_and_determinism():
    rng = mv.Rng(7)
    draws = np.array([rng.normal() for _ in range(20000)])
    assert abs(draws.mean()) < 0.03
    assert abs(draws.var() - 1.0) < 0.05
    a, b = mv.Rng(5), mv.Rng(5)
    assert [a.normal() for _ in range(8)] == [b.normal() for _ in range(8)]


def test_forward_matches_numpy():
    net = mv.init_network(mv.NetworkConfig(output_dim=3, hidden_layers=2,
                                           hidden_width=16, init_seed=4))
    data = mv.make_moons(64, 0.1, 1)
    x = np.asarray(data.points)
    out = np.asarray(mv.forward(net, x))

    a = x
    weights = [np.asarray(w) for w in net.weights]
    biases = [np.asarray(b) for b in net.biases]
    for l in range(2):
        a = np.tanh(a @ weights[l].T + biases[l])
    expected = a @ weights[2].T + biases[2]
    np.testing.assert_allclose(out, expected, rtol=1e-12, atol=1e-12)


def test_jacobian_and_gradient_against_finite_differences():
    net = mv.init_network(mv.NetworkConfig(output_dim=2, hidden_layers=2,
                                           hidden_width=10, init_seed=9))
    x = np.array([0.3, -0.7])
    jac = np.asarray(mv.input_jacobian(net, x))
    h = 1e-6
    for c in range(2):
        xp, xm = x.copy(), x.copy()
        xp[c] += h
        xm[c] -= h
        column = (np.asarray(mv.forward(net, xp[None, :]))[0] -
                  np.asarray(mv.forward(net, xm[None, :]))[0]) / (2 * h)
        np.testing.assert_allclose(jac[:, c], column, rtol=1e-5, atol=1e-8)

    value, _, _ = mv.dirichlet_point_value_and_grad(net, x)
    assert value == pytest.approx(np.sum(jac ** 2), rel=1e-10)


def test_penalty_and_energies():
    rng = np.random.default_rng(0)
    phi = rng.normal(size=(50, 3))
    value, grad = mv.orthogonality_penalty(phi)
    c = phi.T @ phi / 50
    assert value == pytest.approx(np.sum((c - np.eye(3)) ** 2), rel=1e-12)
    np.testing.assert_allclose(np.asarray(grad),
                               4.0 / 50 * phi @ (c - np.eye(3)), rtol=1e-12)

    w = np.asarray(mv.kernel_matrix(phi[:, :2], 0.8))
    energy = mv.graph_energy(phi, w)
    direct = sum(w[i, j] * np.sum((phi[i] - phi[j]) ** 2)
                 for i in range(50) for j in range(50)) / 50 ** 2
    assert energy == pytest.approx(direct, rel=1e-10)


def test_spectral_oracle_and_probe():
    data = mv.make_moons(300, 0.1, 11)
    oracle = mv.spectral_embedding(data.points, 0.1, 5, True)
    emb = np.asarray(oracle.embedding)
    gram = emb.T @ emb / 300
    np.testing.assert_allclose(gram, np.eye(5), atol=1e-10)
    assert np.all(np.diff(np.asarray(oracle.eigenvalues)) >= -1e-12)

    # The bottom eigenspace solves the downstream task on the points it was
    # built from.
    probe = mv.probe_fit(emb, data.quadrant, 1e-6)
    assert mv.probe_accuracy(probe, emb, data.quadrant) > 0.9


def test_training_decreases_the_total_loss():
    data = mv.make_moons(256, 0.1, 21)
    net = mv.init_network(mv.NetworkConfig(output_dim=2, hidden_layers=2,
                                           hidden_width=24, init_seed=22))
    trained, history = mv.train(net, data, objective="graph", lambda_=1e-3,
                                sigma=0.1, learning_rate=0.005, epochs=60,
                                batch_size=64, seed=23)
    totals = [e.total for e in history.epochs]
    assert len(totals) == 60
    assert min(totals[-12:]) <= min(totals[:12])
    assert np.isfinite(totals).all()


def test_alignment_modulo_orthogonal_transforms():
    rng = np.random.default_rng(3)
    base = rng.normal(size=(80, 2))
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)))
    cosines = mv.align(base @ q, base, True)
    np.testing.assert_allclose(cosines, np.ones(3), atol=1e-9)


def test_checkpoint_roundtrip(tmp_path):
    net = mv.init_network(mv.NetworkConfig(output_dim=2, hidden_layers=1,
                                           hidden_width=8, init_seed=31))
    path = str(tmp_path / "net.txt")
    mv.save_network(path, net)
    back = mv.load_network(path)
    for a, b in zip(net.weights, back.weights):
        np.testing.assert_array_equal(np.asarray(a), np.asarray(b))
