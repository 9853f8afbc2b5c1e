"""respact: a Reason+Speak+Act agent loop, household world, user simulators,
dialogue-act schema, and evaluation harness."""

__version__ = "0.1.0"
