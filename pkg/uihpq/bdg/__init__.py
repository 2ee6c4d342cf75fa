from .finite import PointedQuadrangulation, phi_finite, phi_bijectivity_audit, enumerate_domain, \
    enumerate_quadrangulations, domain_size, labels_consistent, successors
from .window import WindowSample, WindowFragment, SpineDecomposition, phi_window, root_half_edge, \
    uihpq_ball, uihpq0_spine
from .radon_nikodym import radon_nikodym_check, stopped_contour, hitting_times
