from app.learner.tree import DecisionTree, LabeledData, Leaf, Split, build_tree, classify_tree, learn, tree_to_formula

__all__ = ["DecisionTree", "LabeledData", "Leaf", "Split", "build_tree", "classify_tree", "learn", "tree_to_formula"]
