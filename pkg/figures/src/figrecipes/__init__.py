"""Figure recipes over fluxtripod CLI CSV artifacts."""

from figrecipes.recipes import ALIASES, RECIPES, FigureRecipe, SchemaError, render

__all__ = ["ALIASES", "RECIPES", "FigureRecipe", "SchemaError", "render"]
