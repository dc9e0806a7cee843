"""cycount: exact ruling polynomials, augmentation-category censuses over F_q,
and intrinsic Hall algebras of odd Calabi-Yau category models."""

__version__ = "0.1.0"
