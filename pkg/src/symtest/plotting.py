"""Figure rendering for the CLI report path (matplotlib, file output only)."""

from __future__ import annotations


def _axes():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0), constrained_layout=True)
    return fig, ax


def _groups_of(rows, key):
    order = []
    for row in rows:
        g = row[key]
        if g not in order:
            order.append(g)
    return order


def render_k_sweep(rows, path: str, ycolumn: str = "p", ylabel: str = "acceptance probability") -> None:
    """One line per group: ycolumn against k."""
    fig, ax = _axes()
    for g in _groups_of(rows, "group"):
        pts = [(r["k"], r[ycolumn]) for r in rows if r["group"] == g and r.get(ycolumn) is not None]
        if pts:
            ax.plot(*zip(*pts), marker="o", label=g)
    ax.set_xlabel("copies k")
    ax.set_ylabel(ylabel)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.savefig(path, dpi=150)
    _close(fig)


def render_t_sweep(rows, path: str, ycolumn: str = "p", ylabel: str = "acceptance probability") -> None:
    """One line per group: ycolumn against evolution time t."""
    fig, ax = _axes()
    for g in _groups_of(rows, "group"):
        pts = [(r["t"], r[ycolumn]) for r in rows if r["group"] == g]
        if pts:
            ax.plot(*zip(*pts), label=g)
    ax.set_xlabel("time t")
    ax.set_ylabel(ylabel)
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.savefig(path, dpi=150)
    _close(fig)


def render_distribution(rows, path: str) -> None:
    """Bar chart of the Fourier-outcome distribution."""
    fig, ax = _axes()
    labels = [r["label"] for r in rows]
    ax.bar(labels, [r["probability"] for r in rows])
    ax.set_xlabel("outcome label")
    ax.set_ylabel("probability")
    ax.grid(True, axis="y", alpha=0.3)
    fig.savefig(path, dpi=150)
    _close(fig)


def _close(fig) -> None:
    import matplotlib.pyplot as plt

    plt.close(fig)
