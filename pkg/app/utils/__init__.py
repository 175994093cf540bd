"""Settings and multiprecision helpers."""
