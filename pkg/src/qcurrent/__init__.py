"""Exact computer algebra for quantum current operators of U_q(sl2-hat).

Modules:

* ``qfield``      exact arithmetic in Q(q^(1/2))
* ``series``      truncated formal series, exp/log, rational kernels, delta checks
* ``heisenberg``  Cartan-current modes, dressing operators, exchange conditions
* ``semimodule``  semi-infinite monomial models of the integrable modules
* ``ideal_lab``   the graded commutative quotient and difference-condition counts
* ``funcmodel``   symmetric-polynomial dual spaces and the residue pairing
* ``cli``         batch entry point (``qcurrent`` console script)
"""

from .qfield import ONE, Q, ZERO, QRat, parse, qint, qpow

__version__ = "0.1.0"

__all__ = ["QRat", "ZERO", "ONE", "Q", "qpow", "qint", "parse", "__version__"]
