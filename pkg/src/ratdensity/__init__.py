"""Densities of rational languages under shift-invariant measures.

The modules mirror the pipeline: ``numeric`` (exact scalars and Cesàro
projectors), ``automata`` (DFAs, ideals, codes), ``monoid`` (transition
monoids and Green's relations), ``shift`` (shift spaces), ``measures``
(invariant measures), ``density`` (the density formulas) and ``skewprod``
(skew products and the weighted counting measure).

The dispatcher lives at ``ratdensity.density.density``; it is not re-exported
here so that ``ratdensity.density`` keeps naming the module.
"""

from .automata import Dfa, parse_dfa_text, to_dfa
from .density import (DensityResult, GeneratingSeries, Method, densities_by_element,
                      density_aperiodic, density_ergodic_formula, density_exact_cesaro,
                      density_left_ideal, density_monte_carlo, density_quasi_ideal,
                      density_right_ideal, density_truncated_cesaro, density_two_sided_ideal,
                      generating_series, mu_of_code)
from .measures import (Bernoulli, LinearRepresentation, Markov, Measure, SoficMeasure,
                       SubstitutionFrequency, periodic_measure, validate)
from .monoid import (GreenStructure, JClassReport, TransitionMonoid, green_structure,
                     is_aperiodic, j_class_of_shift, transition_monoid)
from .numeric import ApproxReal
from .shift import FullShift, PeriodicOrbit, Sft, Sofic, Substitution, SubstitutionMorphism

__version__ = "0.1.0"
