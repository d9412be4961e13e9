"""Leader uniform topology over proximal region families."""
