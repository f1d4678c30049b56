"""stageseat: movie ticketing with seat-level booking, a coin economy,
lexicon sentiment analysis, admin analytics, and a load-test bench."""

__version__ = "0.1.0"
