"""aignn: and-inverter graph toolkit with logic simulation and a recurrent
DAG graph neural network that predicts per-gate signal probabilities."""

__version__ = "0.1.0"
