"""Enumeration of the biggest caterpillar subtree statistic on binary trees."""
