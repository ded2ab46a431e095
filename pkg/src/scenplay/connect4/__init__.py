"""Connect4 built from scenario threads: rules, agent strategies, checks."""
