"""Exact fixity h(T) for every catalog group next to its closed form."""
from diagbase.catalog import CatalogError, aut_action, h_exact, h_for_name, list_catalog


def main():
    print(f"{'group':8} {'|T|':>6} {'|Aut|':>7} {'h exact':>8} {'h formula':>10}")
    for name in list_catalog():
        a = aut_action(name)
        h, _ = h_exact(a)
        try:
            hf = h_for_name(name)
        except CatalogError:
            hf = "-"
        flag = "" if h == hf else "  MISMATCH"
        print(f"{name:8} {a.order:>6} {a.aut_order:>7} {h:>8} {hf!s:>10}{flag}")


if __name__ == "__main__":
    main()
