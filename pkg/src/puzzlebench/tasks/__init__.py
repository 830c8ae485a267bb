"""Task modules, one per puzzle family (registered in puzzlebench.core)."""
