"""chainext: exact-arithmetic chain extensions and their verifications.

Subpackages cover rational linear algebra, graded complexes with contracting
homotopies, Lie-algebra deformation theory, sh-Lie structures, supercommutative
polynomial algebra, constraint (BRST-type) models, and field/antifield
deformation models.  Every identity is checked over Q with no floats.
"""

__version__ = "0.1.0"
