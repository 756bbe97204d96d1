# Core modules
from .models import *
from .patterns import build_theorem1_universe, build_theorem2_universe, expand_template
from .recognizers import classify, check_correct, time_profile, parse_tree, format_tree
from .tournament import pairwise_wins, compare, tournament, verify_cycle, image_level_wins
from .adversary import max_margin_vs, verify_no_dominator, enumerate_reduced_trees
from .simulation import expected_wins, simulate
