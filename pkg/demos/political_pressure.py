"""Who wants the printing press running, and what do they get?

Builds a small heterogeneous population, classifies each member by
transfer receipt and bond exposure, locates the median voter, and
verifies the median-voter shortcut against a brute-force pairwise
majority tournament over the monetization grid.

Run: python demos/political_pressure.py
"""

from giro_sim import policy, population

PARAMS = policy.ModelParams(eta=0.5, i=0.07, phi=0.14, eps=0.2, chi=0.4, p=1.0)
BETA = 0.25


def main():
    pop = population.Population(
        members=(
            population.Inhabitant(theta_j=0.30, b_j=-0.20),   # laborer on subsidy
            population.Inhabitant(theta_j=0.10, b_j=-0.10),   # small artisan
            population.Inhabitant(theta_j=0.00, b_j=0.00),    # the average inhabitant
            population.Inhabitant(theta_j=-0.15, b_j=0.10),   # salaried official
            population.Inhabitant(theta_j=-0.25, b_j=0.20),   # bond-heavy patrician
        ),
        description="stylized five-member town",
    )

    print("member        theta_j    b_j  class")
    for member in pop.members:
        cls = population.classify(member, BETA, PARAMS)
        flag = " (ambiguous)" if cls.ambiguous else ""
        print(f"  {member.theta_j:+7.2f}  {member.b_j:+7.2f}  {cls.value}{flag}")

    print("\npreferred monetization by member (clamped / raw):")
    for member in pop.members:
        pref = policy.inhabitant_optimal_delta(member, BETA, PARAMS)
        print(f"  b_j={member.b_j:+.2f}: {pref.value:.3f} / {pref.unclamped:.3f}")

    median = population.median_inhabitant(pop)
    print(f"\nmedian voter: theta_j={median.theta_j:+.2f}, b_j={median.b_j:+.2f}")
    print(f"subsidized majority: {population.subsidized_majority(pop)}")

    winner = population.condorcet_delta(pop, BETA, PARAMS, grid_step=0.01)
    favorite = population.preferred_grid_delta(median, BETA, PARAMS, grid_step=0.01)
    print(f"brute-force tournament winner: {winner:.2f}")
    print(f"median voter's favorite:       {favorite:.2f}")
    assert winner == favorite

    distortion = policy.political_distortion(median, BETA, PARAMS)
    print(f"\nmedian political distortion: {distortion:+.3f}")
    print(f"politically chosen monetization (pressure chi={PARAMS.chi}): "
          f"{policy.actual_delta(median, BETA, PARAMS):.3f}")


if __name__ == "__main__":
    main()
