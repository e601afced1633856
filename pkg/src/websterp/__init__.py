"""Exact computational engine for the deformed Webster algebra W(n,1) over F_p.

Subpackages:
  scalar_poly     exact F_p multivariate polynomials, derivation, divided differences
  webster_core    the algebra W(n,1): canonical basis, rewriting, multiplication, differential
  polynomial_rep  the faithful polynomial representation V_n (correctness oracle)
  bimodule_calc   the bimodules W_i, W_{i,i+1}, tensor products, homomorphisms
  homological     complexes of bimodules, p-extension, homotopy certification
  cli_report      command line front end and JSON reports
"""

__version__ = "0.1.0"
