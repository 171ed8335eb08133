"""taxomine: hypernym extraction from a term list and a text corpus.

Given a flat list of domain terms and a wiki-style dump, the pipeline
normalizes the corpus (tokenize, Porter-stem, mask stopwords), counts how
often terms occur and co-occur, and proposes (hyponym, hypernym) pairs via
two routes: subterm heuristics on the term surfaces, and a co-occurrence
rule that points each term at the most document-frequent terms it shares
sentences with.  An evaluation harness scores the result against gold
pairs and reports cycles.
"""

__version__ = "0.1.0"
