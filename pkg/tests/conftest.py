import numpy as np
import pytest
from app.models.spec import PhsSpec
from app.services.example_service import get_example


def random_unitary(rng, n):
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_hermitian(rng, n, low, high, signed=False):
    V = random_unitary(rng, n)
    w = rng.uniform(low, high, n)
    if signed:
        w = w * rng.choice([-1.0, 1.0], n)
    return (V * w) @ V.conj().T


def canonical_ports(P2):
    """u_c = (P2·e'(b), P2·e'(a))，y_c = (e(b), −e(a))，满足 Re(u_c*y_c) = q(z)"""
    n = P2.shape[0]
    Uc = np.zeros((2 * n, 4 * n), dtype=complex)
    Yc = np.zeros((2 * n, 4 * n), dtype=complex)
    Uc[0:n, n:2 * n] = P2
    Uc[n:2 * n, 3 * n:4 * n] = P2
    Yc[0:n, 0:n] = np.eye(n)
    Yc[n:2 * n, 2 * n:3 * n] = -np.eye(n)
    return Uc, Yc


def random_spec(rng, n, kind="derivative", passive=True, singular=False, name="random"):
    """
    随机可容许规格（m = 2n）

    derivative：u = A(u_c + D·y_c)，y = A^{-*}y_c，D 的 Hermitian 部分半正定，恒适定
    value：u = A(y_c + E·u_c)，y = A^{-*}u_c，E 奇异时 B1 奇异
    passive=False 时翻转 WC 的符号
    """
    P2 = 1j * random_hermitian(rng, n, 0.5, 2.0, signed=True)
    P0 = 1j * 0.1 * random_hermitian(rng, n, -1.0, 1.0)
    H = random_hermitian(rng, n, 0.5, 2.0)
    Uc, Yc = canonical_ports(P2)
    A = rng.standard_normal((2 * n, 2 * n)) + 1j * rng.standard_normal((2 * n, 2 * n)) + 3.0 * np.eye(2 * n)
    Ainv_h = np.linalg.inv(A).conj().T
    G = rng.standard_normal((2 * n, 2 * n)) + 1j * rng.standard_normal((2 * n, 2 * n))
    if kind == "derivative":
        D = 0.2 * G @ G.conj().T + 0.3 * (G - G.conj().T)
        WB1, WC = A @ (Uc + D @ Yc), Ainv_h @ Yc
    else:
        E = 0.2 * G @ G.conj().T
        if singular:
            E[:, 0] = 0.0
            E[0, :] = 0.0
        WB1, WC = A @ (Yc + E @ Uc), Ainv_h @ Uc
    if not passive:
        WC = -WC
    return PhsSpec(name=name, n=n, m=2 * n, a=0.0, b=float(rng.uniform(0.5, 2.0)), P2=P2, P0=P0, H=H,
                   WB1=WB1, WB2=np.zeros((0, 4 * n)), WC=WC)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def schrodinger():
    return get_example("schrodinger")


@pytest.fixture
def eb_illposed():
    return get_example("eb-illposed")


@pytest.fixture
def roller_beam():
    return get_example("roller-beam")


@pytest.fixture
def eb_generic():
    return get_example("eb-generic")


@pytest.fixture
def scalar_channel():
    return get_example("scalar-channel")


BUILTIN_KEYS = ("schrodinger", "eb-illposed", "roller-beam", "eb-generic", "scalar-channel")
WELL_POSED_KEYS = ("schrodinger", "roller-beam", "eb-generic", "scalar-channel")
