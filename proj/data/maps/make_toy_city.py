"""Regenerates toy_city.osm, ../labels/toy_city_labels.csv and
../labels/toy_city_zones.grid."""

from pathlib import Path

HERE = Path(__file__).resolve().parent
LAT0, LON0 = 33.3000, 44.3500
DLAT, DLON = 0.00135, 0.0016  # about 150 m
N = 12


def node_id(i, j):
    return 1 + i * N + j


def grid_pos(i, j):
    return LAT0 + i * DLAT, LON0 + j * DLON


def write_osm():
    nodes, ways = [], []
    for i in range(N):
        for j in range(N):
            lat, lon = grid_pos(i, j)
            nodes.append((node_id(i, j), lat, lon))
    wid = 1000
    for i in range(N):
        kind = "secondary" if i == N // 2 else "residential"
        ways.append((wid, [node_id(i, j) for j in range(N)],
                     {"highway": kind, "name": f"Street {i + 1}"}))
        wid += 1
    for j in range(N):
        kind = "secondary" if j == N // 2 else "residential"
        ways.append((wid, [node_id(i, j) for i in range(N)],
                     {"highway": kind, "name": f"Avenue {j + 1}"}))
        wid += 1
    # Diagonal boulevard through the grid intersections.
    ways.append((wid, [node_id(k, k) for k in range(N)],
                 {"highway": "primary", "name": "Diagonal"}))
    wid += 1
    # A spur whose first node duplicates the coordinates of grid node (3,3).
    lat, lon = grid_pos(3, 3)
    nodes.append((900, lat, lon))
    nodes.append((901, lat + DLAT / 2, lon + DLON / 2))
    ways.append((wid, [900, 901], {"highway": "service"}))
    wid += 1
    # An isolated lane away from the grid.
    nodes.append((910, LAT0 - 4 * DLAT, LON0 - 4 * DLON))
    nodes.append((911, LAT0 - 4 * DLAT, LON0 - 3 * DLON))
    ways.append((wid, [910, 911], {"highway": "track"}))
    wid += 1
    # Non-road features.
    b = [(920 + k, LAT0 + 1.2 * DLAT + dy, LON0 + 1.2 * DLON + dx)
         for k, (dy, dx) in enumerate([(0, 0), (0, 0.0004), (0.0003, 0.0004),
                                       (0.0003, 0)])]
    nodes.extend(b)
    ways.append((wid, [n[0] for n in b] + [b[0][0]], {"building": "yes"}))
    wid += 1
    zones = [("residential", 0, 0, 6, 12), ("commercial", 6, 0, 12, 6),
             ("park", 6, 6, 12, 12)]
    nid = 930
    for use, i0, j0, i1, j1 in zones:
        corners = [(i0 - 0.4, j0 - 0.4), (i0 - 0.4, j1 - 0.6),
                   (i1 - 0.6, j1 - 0.6), (i1 - 0.6, j0 - 0.4)]
        ids = []
        for ci, cj in corners:
            nodes.append((nid, LAT0 + ci * DLAT, LON0 + cj * DLON))
            ids.append(nid)
            nid += 1
        ways.append((wid, ids + [ids[0]], {"landuse": use}))
        wid += 1
    # References a node that is not in the file.
    ways.append((wid, [node_id(0, 0), 99999], {"highway": "footway"}))

    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           '<osm version="0.6" generator="make_toy_city.py">',
           f'  <bounds minlat="{LAT0 - 5 * DLAT:.7f}" minlon="{LON0 - 5 * DLON:.7f}" '
           f'maxlat="{LAT0 + N * DLAT:.7f}" maxlon="{LON0 + N * DLON:.7f}"/>']
    for nid_, lat, lon in nodes:
        out.append(f'  <node id="{nid_}" lat="{lat:.7f}" lon="{lon:.7f}"/>')
    for wid_, refs, tags in ways:
        out.append(f'  <way id="{wid_}">')
        out.extend(f'    <nd ref="{r}"/>' for r in refs)
        out.extend(f'    <tag k="{k}" v="{v}"/>' for k, v in tags.items())
        out.append('  </way>')
    out.append('</osm>')
    (HERE / "toy_city.osm").write_text("\n".join(out) + "\n")


def write_labels():
    # 25 homes in the south half, 5 workplaces and 10 public places north.
    homes = [(i, j) for i in range(0, 6) for j in range(0, 12, 2)][:25]
    work = [(8, 1), (8, 3), (10, 2), (10, 4), (9, 5)]
    public = [(7, 7), (7, 9), (7, 11), (9, 7), (9, 9), (9, 11), (11, 7),
              (11, 9), (11, 11), (6, 6)]
    rows = ["lat,lon,role"]
    for role, cells in (("home", homes), ("work", work), ("public", public)):
        for i, j in cells:
            lat, lon = grid_pos(i, j)
            # Slightly off the intersection; snapping must recover it.
            rows.append(f"{lat + 0.00002:.6f},{lon - 0.00002:.6f},{role}")
    (HERE.parent / "labels" / "toy_city_labels.csv").write_text(
        "\n".join(rows) + "\n")


def write_grid():
    lines = ["# agentsim-region-grid v1",
             "# rows run south to north; '.' is unzoned",
             f"origin_lat {LAT0 - DLAT / 2:.6f}",
             f"origin_lon {LON0 - DLON / 2:.6f}",
             "cell_size_deg 0.0032", "rows 6", "cols 6"]
    for r in range(6):
        if r < 3:
            lines.append(" ".join(["R"] * 6))
        else:
            lines.append(" ".join(["C"] * 3 + ["P"] * 3))
    (HERE.parent / "labels" / "toy_city_zones.grid").write_text(
        "\n".join(lines) + "\n")


if __name__ == "__main__":
    write_osm()
    write_labels()
    write_grid()
