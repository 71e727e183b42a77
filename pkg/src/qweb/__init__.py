"""Exact evaluation of exterior gl_n webs and colored link polynomials."""

__version__ = "0.1.0"
