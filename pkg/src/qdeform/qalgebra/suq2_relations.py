"""Quantum-group relations, frozen output of ``qdeform.qalgebra.derive``.

Regenerate with ``python -m qdeform.qalgebra.derive``; do not edit by hand.
"""

# (left, right) -> {word: {exponent: coefficient}}
SUQ2_RULES = {
    ('alpha', 'alphabar'): {
        (): {0: '1', 2: '-1'},
        ('alphabar', 'alpha'): {2: '1'},
    },
    ('beta', 'alpha'): {
        ('alpha', 'beta'): {-1: '1'},
    },
    ('beta', 'alphabar'): {
        ('alphabar', 'beta'): {1: '1'},
    },
    ('beta', 'betabar'): {
        (): {2: '1'},
        ('alphabar', 'alpha'): {2: '-1'},
    },
    ('betabar', 'alpha'): {
        ('alpha', 'betabar'): {-1: '1'},
    },
    ('betabar', 'alphabar'): {
        ('alphabar', 'betabar'): {1: '1'},
    },
    ('betabar', 'beta'): {
        (): {2: '1'},
        ('alphabar', 'alpha'): {2: '-1'},
    },
}
