from buchi_rl.mc.bounds import tight_hyperparameters


def suggest_hyperparameters(state_count: int, p_min: float) -> tuple[float, float]:
    """(U, γ) from the loose bounds C∅ = C_ℱ = |S|/p_min and N = |S|."""
    if state_count < 1 or not 0 < p_min <= 1:
        raise ValueError("need state_count >= 1 and p_min in (0, 1]")
    C = state_count / p_min
    U, gamma = tight_hyperparameters(C, C, state_count)
    return min(U, 1.0), min(max(gamma, 1e-12), 1.0 - 1e-12)
