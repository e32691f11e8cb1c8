"""
strabs.mdsqcc - MDS quantum convolutional codes from constacyclic codes over F_{q²}.

Submodules:
- strabs.mdsqcc.gf - Prime-field towers F_q ⊂ F_{q²} ⊂ F_{q⁴} and their galois bridges
- strabs.mdsqcc.cosets - q²-cyclotomic cosets and defining sets
- strabs.mdsqcc.block - Constacyclic block codes, duals and distance oracles
- strabs.mdsqcc.conv - Polynomial generator matrices and their checks
- strabs.mdsqcc.quantum - Stabilizer parameters, certificates and tables
- strabs.mdsqcc.runner - Job pool with a live progress tree
- strabs.mdsqcc.verify - YAML-driven invariant suites
- strabs.mdsqcc.cli - The ``mdsqcc`` command line
"""

__version__ = "0.1.0"
