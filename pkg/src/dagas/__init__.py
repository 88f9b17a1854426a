"""dagas: directed lattice animals, hard-particle gas models, transfer
matrices and the Markov chains of their line processes."""

from ._kernels import backend_name
from .animals import CountSeries, enumerate_counts, series_eval_alternating
from .gas import (Animal, HashColoring, TableColoring, estimate_occupation,
                  gas_value, random_animal)
from .cyclic_mc import (ChainSpec, EigenTriple, TransferMatrix,
                        cyclic_marginal, cyclic_path_prob, dominant_eigen,
                        limit_chain, to_cyclic_mc, transfer_cyclic_law)
from .gf import LineSource, adjudicate, adjudicate_all, gf_value, source_prob
from .lattice import (Ball, Lattice, MarkedGraph, ball, is_free_set,
                      lr_lattice, ln_lattice, marked_distance, parse_lattice,
                      square_lattice, tn_lattice, tri_lattice)
from .transfer import (build_transfer, char_poly_check, neighborhoods,
                       recurrence_residual, stationary_line_law)

__version__ = "0.1.0"

__all__ = [
    "Animal", "Ball", "ChainSpec", "CountSeries", "EigenTriple",
    "HashColoring", "Lattice", "LineSource", "MarkedGraph", "TableColoring",
    "TransferMatrix", "adjudicate", "adjudicate_all", "backend_name", "ball",
    "build_transfer", "char_poly_check", "cyclic_marginal",
    "cyclic_path_prob", "dominant_eigen", "enumerate_counts",
    "estimate_occupation", "gas_value", "gf_value", "is_free_set",
    "limit_chain", "ln_lattice", "lr_lattice", "marked_distance",
    "neighborhoods", "parse_lattice", "random_animal", "recurrence_residual",
    "series_eval_alternating", "source_prob", "square_lattice",
    "stationary_line_law", "tn_lattice", "to_cyclic_mc", "transfer_cyclic_law",
    "tri_lattice",
]
