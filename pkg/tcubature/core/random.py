"""Seeded random streams and the samplers built on them.

All randomness in the package is drawn from :class:`RngStream` objects. A
stream is identified by ``(algorithm, seed, stream)`` and the same triple
always yields the same sequence, so parallel Monte Carlo runs can each be
handed their own derived stream.

"""
import math
import typing as t

import numpy as np

from ..exceptions import DofTooSmall, DomainError
from .linalg import cholesky_sqrt

ALGORITHM = "philox"

MAX_UINT64 = 2**64 - 1

Size = t.Optional[t.Union[int, t.Tuple[int, ...]]]


class RngStream:
    """A reproducible random stream.

    The stream is a counter-based Philox generator seeded from a
    :class:`numpy.random.SeedSequence` built from ``seed`` and the stream
    key, so derived streams are statistically independent.

    :param seed: Master seed, an unsigned 64-bit integer.
    :param stream: Stream index, or a tuple of indices for nested streams.

    """

    algorithm = ALGORITHM

    def __init__(
        self,
        seed: int = 0,
        stream: t.Union[int, t.Sequence[int]] = 0,
    ):
        if isinstance(stream, (int, np.integer)):
            stream = (int(stream),)
        key = tuple(int(s) for s in stream)

        for name, value in (("seed", seed), *(("stream", s) for s in key)):
            if not 0 <= int(value) <= MAX_UINT64:
                raise DomainError(name, value, "0 <= value < 2**64")

        self.seed = int(seed)
        self.stream = key

        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=key)
        self.generator = np.random.Generator(np.random.Philox(sequence))

    def __repr__(self):
        name = self.__class__.__name__
        return f"{name}(seed={self.seed}, stream={self.stream!r})"

    def derive(self, *indices: int) -> "RngStream":
        """Return the child stream at ``indices`` below this stream."""
        return self.__class__(self.seed, self.stream + tuple(indices))


def sample_standard_normal(rng: RngStream, size: Size = None):
    """Draw standard normal variates."""
    return rng.generator.standard_normal(size)


def sample_gamma(rng: RngStream, shape: float, rate: float = 1.0, size=None):
    """Draw ``Gamma(shape, rate)`` variates (mean ``shape / rate``).

    Uses the Marsaglia-Tsang squeeze method, boosted for ``shape < 1``,
    which is what :meth:`numpy.random.Generator.standard_gamma` implements.

    :raises DomainError: ``shape`` or ``rate`` not positive.

    """
    if not shape > 0:
        raise DomainError("shape", shape, "shape > 0")
    if not rate > 0:
        raise DomainError("rate", rate, "rate > 0")

    return rng.generator.standard_gamma(shape, size) / rate


def sample_beta(rng: RngStream, alpha: float, beta: float, size=None):
    """Draw ``Beta(alpha, beta)`` variates as ``g1 / (g1 + g2)``."""
    if not alpha > 0:
        raise DomainError("alpha", alpha, "alpha > 0")
    if not beta > 0:
        raise DomainError("beta", beta, "beta > 0")

    g1 = sample_gamma(rng, alpha, 1.0, size)
    g2 = sample_gamma(rng, beta, 1.0, size)

    return g1 / (g1 + g2)


def sample_haar_orthogonal(rng: RngStream, n: int, size: Size = None):
    """Draw a Haar-distributed orthogonal ``(n, n)`` matrix.

    QR-factorise a matrix of standard normal variates and flip each column
    of ``Q`` by the sign of the matching diagonal entry of ``R``; without
    the flip ``Q`` is orthogonal but not uniform on the orthogonal group.

    With ``size`` a stack of ``size`` independent matrices is returned.

    """
    if n < 1:
        raise DomainError("n", n, "n >= 1")

    batch = () if size is None else np.atleast_1d(size).tolist()
    shape = (*batch, n, n)

    while True:
        gauss = sample_standard_normal(rng, shape)
        q, r = np.linalg.qr(gauss)

        signs = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
        # a zero pivot means a rank-deficient draw, which has probability 0
        if np.all(signs != 0):
            break

    return q * signs[..., np.newaxis, :]


def sample_multivariate_normal(
    rng: RngStream, mu, sigma, size=None, chol=None
):
    """Draw from ``N(mu, sigma)``.

    :param chol: Lower Cholesky factor of ``sigma``, if already known.

    """
    mu = np.asarray(mu, dtype=float).reshape(-1)
    if chol is None:
        chol = cholesky_sqrt(sigma, name="sigma")

    batch = () if size is None else np.atleast_1d(size).tolist()
    z = sample_standard_normal(rng, (*batch, mu.shape[0]))

    return mu + z @ chol.T


def sample_multivariate_student_t(
    rng: RngStream,
    mu,
    sigma,
    nu: float,
    size=None,
    chol=None,
):
    """Draw from ``St(mu, sigma, nu)``.

    Each draw is ``mu + L z sqrt(nu / w)`` with ``z`` standard normal and
    ``w`` chi-square with ``nu`` degrees of freedom.

    :raises DofTooSmall: ``nu`` is not positive.

    """
    if not nu > 0:
        raise DofTooSmall(nu, minimum=0.0)
    if math.isinf(nu):
        return sample_multivariate_normal(rng, mu, sigma, size, chol=chol)

    mu = np.asarray(mu, dtype=float).reshape(-1)
    if chol is None:
        chol = cholesky_sqrt(sigma, name="sigma")

    batch = () if size is None else np.atleast_1d(size).tolist()
    z = sample_standard_normal(rng, (*batch, mu.shape[0]))
    w = sample_gamma(rng, 0.5 * nu, 0.5, size)

    scale = np.sqrt(nu / np.asarray(w))
    return mu + (z @ chol.T) * np.asarray(scale)[..., np.newaxis]
