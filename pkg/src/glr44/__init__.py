"""Exact computational workbench for connective K-theory of B(Z/4 x Z/4).

Subpackages cover exact linear algebra (GF(2), integer normal forms,
circle-group subgroups), finite subalgebras of the mod-2 Steenrod algebra
and their graded modules, group cohomology of BZ/4 and the smash factor,
minimal free resolutions / Ext charts, spectral-sequence bookkeeping,
the integral model of ku_*(BZ/4), exact eta-invariant evaluation, and the
final detection ledger with its command-line driver.
"""

__version__ = "0.1.0"
