"""
HLV quasi-Monte Carlo toolkit

Prices geometric-average Asian options and their Greeks under the hyperbolic
local volatility model with Mersenne Twister Monte Carlo and Sobol
quasi-Monte Carlo, using incremental or Brownian-bridge path construction,
and runs RMSE convergence-rate studies.
"""

__version__ = "0.1.0"
