"""q-deformed oscillator calculus: q-numbers, Jackson calculus, Fock realizations,
ground states, q-Fourier transforms and the q-delta function."""

__version__ = "0.1.0"
