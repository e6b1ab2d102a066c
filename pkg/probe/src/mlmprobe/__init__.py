"""Masked-LM probe: fine-tune a pretrained encoder classifier on emitted
minimal-pair dataset files and measure which generalization it formed.

Consumes the generator's dataset files and emits reports in the same
eval-result schema; it does not import the generator package.
"""

__version__ = "0.1.0"

from mlmprobe.config import ProbeConfig
from mlmprobe.dataio import Record, load_dataset, load_split
from mlmprobe.plotting import plot_restarts

__all__ = ["__version__", "ProbeConfig", "Record", "load_dataset", "load_split",
           "plot_restarts"]
