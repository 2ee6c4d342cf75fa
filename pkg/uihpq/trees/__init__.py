from .plane_tree import PlaneTree, LabeledTree, uniform_labeling, enumerate_labelings
from .offspring import OffspringLaw, DiracLaw, GeometricLaw, SizeBiasedGeometricLaw, TabulatedLaw
from .samplers import sample_gw, sample_gw_geometric, gw_probability, sample_two_type_gw, \
    two_type_gw_probability, check_critical, sample_kesten_two_type, sample_kesten_geometric_spine, \
    KestenTree, KestenSpine, DEFAULT_SIZE_CAP
from .forest import Forest, count_forests, enumerate_forests, sample_uniform_forest, sample_labeled_forest
from .bridge import Bridge, BridgeWindow, DownSteps, down_steps, enumerate_bridges, sample_uniform_bridge, \
    sample_infinite_bridge_window
from .contour import ContourLabelPair, contour_label, contour_label_window, attachment, \
    exact_prefix_law_tv, PrefixLawTV
from .looptree import loop_of, tree_of, looptree_components, LooptreeComponents
