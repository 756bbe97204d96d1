# Nontransitive preference among recognition algorithms
__version__ = "1.0.0"
