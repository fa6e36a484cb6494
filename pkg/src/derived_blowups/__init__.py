"""Exact computations with derived zero loci, Koszul complexes and
derived blow-up charts over finitely presented Q-algebras."""
