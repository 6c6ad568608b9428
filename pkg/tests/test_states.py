import numpy as np
import pytest

from qreact.errors import ArityError, DomainError, InvalidStateError, StateFileError, UnknownStateError
from qreact.qcore import DensityMatrix, apply_local_unitaries, haar_random_unitary, partial_trace
from qreact.states import (
    bell,
    classical_corr,
    ghz,
    parse_state_spec,
    product,
    random_pure,
    singlet,
    werner,
    wstate,
)


def test_bell():
    rho = bell()
    assert abs(np.trace(rho.matrix) - 1) < 1e-12
    assert abs(rho.purity() - 1) < 1e-12
    assert abs(rho.matrix[0, 3] - 0.5) < 1e-12
    assert np.allclose(partial_trace(rho, [1]).matrix, np.eye(2) / 2, atol=1e-12)


def test_singlet():
    rho = singlet()
    assert abs(rho.matrix[1, 2] + 0.5) < 1e-12
    assert abs(rho.purity() - 1) < 1e-12


def test_singlet_invariant_under_u_tensor_u():
    rho = singlet()
    for seed in range(20):
        u = haar_random_unitary(2, seed)
        assert apply_local_unitaries(rho, [u, u]).allclose(rho, 1e-10)


def test_werner():
    assert np.allclose(werner(0).matrix, np.eye(4) / 4, atol=1e-15)
    assert werner(1).allclose(bell(), 1e-15)
    assert np.allclose(sorted(werner(0.5).eigenvalues()), [0.125, 0.125, 0.125, 0.625], atol=1e-12)
    with pytest.raises(DomainError):
        werner(1.5)
    with pytest.raises(DomainError):
        werner(-0.1)


def test_multipartite_constructors():
    assert ghz(2).allclose(bell(), 1e-15)
    w = wstate(3)
    for k in range(3):
        assert np.allclose(partial_trace(w, [k]).matrix, np.diag([2 / 3, 1 / 3]), atol=1e-12)
    cc = classical_corr()
    assert np.count_nonzero(cc.matrix - np.diag(np.diag(cc.matrix))) == 0
    assert random_pure(3, 4).allclose(random_pure(3, 4), 0)
    assert abs(random_pure(3, 4).purity() - 1) < 1e-12
    for n in (1, 7):
        with pytest.raises(DomainError):
            ghz(n)


def test_product_state():
    rho = product([(0, 0, 1), (1, 0, 0)])
    assert rho.dims == (2, 2)
    assert np.allclose(partial_trace(rho, [1]).matrix, np.full((2, 2), 0.5), atol=1e-12)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("werner:0.7", werner(0.7)),
        ("ghz:3", ghz(3)),
        ("bell", bell()),
        ("singlet", singlet()),
        ("classical-corr", classical_corr()),
        ("wstate:4", wstate(4)),
        ("random-pure:2:9", random_pure(2, 9)),
        ("product:z:x", product([(0, 0, 1), (1, 0, 0)])),
        ("product:-z", product([(0, 0, -1)])),
    ],
)
def test_parse_state_spec(text, expected):
    assert parse_state_spec(text).allclose(expected, 1e-14)


def test_parse_state_errors(tmp_path):
    with pytest.raises(DomainError):
        parse_state_spec("werner:1.5")
    with pytest.raises(UnknownStateError):
        parse_state_spec("cat:3")
    with pytest.raises(ArityError):
        parse_state_spec("werner")
    with pytest.raises(ArityError):
        parse_state_spec("bell:1")
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    with pytest.raises(StateFileError):
        parse_state_spec(f"file:{bad}")
    nonpsd = tmp_path / "nonpsd.json"
    nonpsd.write_text('{"dims": [2], "re": [1.5, 0, 0, -0.5], "im": [0, 0, 0, 0]}')
    with pytest.raises(InvalidStateError):
        parse_state_spec(f"file:{nonpsd}")
    # each failure kind carries its own code
    codes = {DomainError.code, UnknownStateError.code, ArityError.code, StateFileError.code,
             InvalidStateError.code}
    assert len(codes) == 5


def test_parse_file(tmp_path):
    path = tmp_path / "w.json"
    werner(0.25).save(path)
    assert parse_state_spec(f"file:{path}").allclose(werner(0.25), 0)


def test_all_constructors_valid():
    for rho in [bell(), singlet(), werner(0.3), ghz(5), wstate(6), classical_corr(), random_pure(4, 1)]:
        DensityMatrix(rho.dims, rho.matrix)  # re-validates
