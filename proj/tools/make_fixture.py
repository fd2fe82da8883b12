#!/usr/bin/env python3
"""Writes the small synthetic corpus under data/fixture/.

Everything is driven by one seeded RNG, so rerunning reproduces the
committed files byte for byte.
"""

import argparse
import math
import pathlib
import random
from xml.sax.saxutils import escape

PLACES = [
    "Ashford", "Brookvale", "Carrow", "Dunmore", "Eastwick", "Fairhaven",
    "Glenrock", "Harlow", "Ingleby", "Jasper", "Kingsbridge", "Larkfield",
    "Marston", "Northgate", "Oakridge", "Pemberton", "Queensbury", "Redcliffe",
    "Stanmore", "Thornbury", "Upton", "Valemont", "Westbrook", "Yarrow",
    "Zennor", "Aldridge", "Belmont", "Calder", "Denholm", "Elmstead",
    "Foxley", "Grantham", "Hollins", "Ivybridge", "Kelso", "Linford",
]

FIRST = ["Ada", "Ben", "Cora", "Dev", "Elin", "Finn", "Gus", "Hana", "Ivo",
         "Jun", "Kai", "Lena", "Milo", "Nia", "Omar", "Pia", "Quin", "Rosa",
         "Sami", "Tess"]
LAST = ["Abbott", "Brandt", "Castro", "Dahl", "Evans", "Fischer", "Gupta",
        "Hale", "Ito", "Jansen", "Kovac", "Lindqvist", "Moreau", "Novak",
        "Okafor", "Price", "Quist", "Reyes", "Sato", "Tanaka"]

TPAMI_VARIANTS = [
    "IEEE Transactions on Pattern Analysis and Machine Intelligence",
    "PAMI",
    "Pattern Analysis and Machine Intelligence",
    "IEEE Transaction On",
    "IEEE Trans. Pattern Anal. Mach. Intell.",
    "IEEE TPAMI",
    "TPAMI",
    "IEEE Transactions on Patterns Analysis and Machine Intelligence",
    "IEEE Trans. on Pattern Analysis and Machine Intelligence",
    "IEEE Transactions on Pattern Analysis & Machine Intelligence",
    "IEEE PAMI",
    "Trans. Pattern Anal. Mach. Intell.",
    "IEEE Trans Pattern Anal Mach Intell",
]

JOURNALS = [
    # name, has page, relative prominence
    ("Nature", True, 3.0),
    ("Science", True, 2.8),
    ("Cell", True, 1.6),
    ("The Lancet", True, 1.5),
    ("Journal of Informetrics", True, 0.6),
    ("Scientometrics", True, 0.7),
    ("Machine Learning", True, 0.8),
    ("Journal of Applied Widgets", False, 0.3),
    ("Annals of Fictional Studies", False, 0.2),
    ("Quarterly Review of Examples", False, 0.25),
    ("Pattern Recognition", True, 0.9),
]


def university_names():
    names = []
    for i, place in enumerate(PLACES):
        names.append(f"University of {place}" if i % 3 else f"{place} University")
    return names


def page_xml(title, text, ns=0):
    return (
        "  <page>\n"
        f"    <title>{escape(title)}</title>\n"
        f"    <ns>{ns}</ns>\n"
        f'    <revision><text xml:space="preserve">{escape(text)}</text>'
        "</revision>\n"
        "  </page>\n"
    )


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="data/fixture")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    out = pathlib.Path(args.out)
    (out / "pageviews").mkdir(parents=True, exist_ok=True)

    unis = university_names()
    quality = {u: rng.lognormvariate(0.0, 0.6) for u in unis}
    abbrev = {u: "".join(w[0] for w in u.split() if w[0].isupper()) + " (university)"
              for u in unis[:6]}

    pages = []
    types = []

    # Universities link to a few peers.
    for u in unis:
        peers = rng.sample([x for x in unis if x != u], rng.randint(1, 4))
        body = (f"'''{u}''' is a public research university. "
                f"It collaborates with {', '.join(f'[[{p}]]' for p in peers)}. "
                f"{{{{Infobox university|name={u}|established={rng.randint(1800, 1990)}}}}}")
        pages.append((u, body))
        types.append((u, "University"))
    for u, a in abbrev.items():
        pages.append((a, f"#REDIRECT [[{u}]]"))

    # People with infoboxes; better universities attract more of them.
    weights = [quality[u] for u in unis]
    people = []
    for i in range(160):
        name = f"{FIRST[i % len(FIRST)]} {LAST[(i * 7) % len(LAST)]} ({i})"
        people.append(name)
        fields = []
        work = rng.choices(unis, weights)[0]
        study = rng.choices(unis, weights)[0]
        if rng.random() < 0.7:
            ref = f"[[{abbrev[work]}]]" if work in abbrev and rng.random() < 0.5 \
                else f"[[{work}]]"
            fields.append(f"workplaces = {ref}")
        if rng.random() < 0.3:
            fields.append(f"employer = [[{work}]]")
        if rng.random() < 0.8:
            if rng.random() < 0.5:
                fields.append(f"alma_mater = [[{study}]]")
            else:
                fields.append(f"education = {study}, {rng.randint(1950, 2010)}")
        if rng.random() < 0.2:
            fields.append(f"college = [[{rng.choice(unis)}]]")
        box = "{{Infobox scientist\n| name = " + name + "\n| " + \
            "\n| ".join(fields) + "\n}}" if fields else ""
        text = (f"{box}\n'''{name}''' is a researcher. "
                f"They worked at [[{work}]].")
        pages.append((name, text))
        types.append((name, "Person"))

    # Journal pages and citing articles.
    for j, has_page, _ in JOURNALS:
        if has_page:
            pages.append((j, f"'''{j}''' is a peer-reviewed journal."))
            types.append((j, "Journal"))
    pages.append(("IEEE Transactions on Pattern Analysis and Machine Intelligence",
                  "A monthly journal on computer vision."))
    types.append(("IEEE Transactions on Pattern Analysis and Machine Intelligence",
                  "Journal"))
    pages.append(("TPAMI", "#REDIRECT [[IEEE Transactions on Pattern Analysis "
                           "and Machine Intelligence]]"))

    cite_weights = [w for _, _, w in JOURNALS]
    for i in range(90):
        title = f"Topic {i:03d}"
        mentioned = rng.choices(unis, weights, k=rng.randint(1, 4))
        linked = rng.choices(unis, weights, k=rng.randint(0, 3))
        parts = [f"Research on topic {i} at {m} continues." for m in mentioned]
        parts += [f"See [[{l}]]." for l in linked]
        for _ in range(rng.randint(0, 4)):
            j = rng.choices(JOURNALS, cite_weights)[0][0]
            raw = rng.choice([j, j.upper(), j.lower() + ".", f"[[{j}]]"])
            parts.append(f"<ref>{{{{cite journal|title=Study {rng.randint(1, 999)}"
                         f"|journal={raw}|year={rng.randint(1990, 2013)}}}}}</ref>")
        if i < len(TPAMI_VARIANTS):
            parts.append(f"<ref>{{{{Citation|title=Vision {i}"
                         f"|journal={TPAMI_VARIANTS[i]}}}}}</ref>")
        pages.append((title, " ".join(parts)))

    dump = ['<mediawiki xmlns="http://www.mediawiki.org/xml/export-0.10/">\n']
    for title, text in pages:
        dump.append(page_xml(title, text))
    dump.append(page_xml("Category:Universities", "[[Category:Education]]", 14))
    dump.append("</mediawiki>\n")
    (out / "dump.xml").write_text("".join(dump))

    (out / "types.tsv").write_text(
        "# title<TAB>kind\n" + "".join(f"{t}\t{k}\n" for t, k in types))

    # Pageviews: two days in the study period, one outside it.
    def views_file(name, scale):
        lines = []
        for u in unis:
            total = max(1, int(quality[u] * scale * rng.uniform(0.8, 1.2)))
            lines.append(f"en {u.replace(' ', '_')} {total} {total * 900}")
            if u in abbrev and rng.random() < 0.8:
                encoded = abbrev[u].replace(" ", "_").replace("(", "%28")
                encoded = encoded.replace(")", "%29")
                lines.append(f"en {encoded} {rng.randint(1, 30)} 100")
            if rng.random() < 0.3:
                lines.append(f"de {u.replace(' ', '_')} {rng.randint(1, 50)} 100")
        for p in rng.sample(people, 20):
            lines.append(f"en {p.replace(' ', '_')} {rng.randint(1, 40)} 100")
        lines.append("en Nonexistent_Page 12 100")
        lines.append("garbage line")
        (out / "pageviews" / name).write_text("\n".join(lines) + "\n")

    views_file("pagecounts-20131201-000000", 400)
    views_file("pagecounts-20131202-000000", 380)
    views_file("pagecounts-20140105-000000", 10000)

    # Benchmarks: noisy views of the latent quality.
    def benchmark(name, noise, skip, extra):
        scored = sorted(unis, key=lambda u: -(math.log(quality[u]) +
                                             rng.gauss(0, noise)))
        rows = ["rank,name"]
        rank = 0
        for u in scored:
            if u in skip:
                continue
            rank += 1
            shown = u
            if u == unis[1]:
                shown = f"{u.split()[-1]} Univ."  # resolved by aliases.tsv
            rows.append(f"{rank},{shown}")
        for e in extra:
            rank += 1
            rows.append(f"{rank},{e}")
        (out / "benchmarks" / f"{name}.csv").write_text("\n".join(rows) + "\n")

    (out / "benchmarks").mkdir(exist_ok=True)
    benchmark("arwu", 0.3, set(unis[-3:]), ["Imaginary Institute"])
    benchmark("the", 0.4, set(unis[-6:-3]), [])
    benchmark("webometrics", 0.6, set(unis[:2]), ["Nowhere College"])

    (out / "aliases.tsv").write_text(
        "# alias<TAB>canonical\n"
        f"{unis[1].split()[-1]} Univ.\t{unis[1]}\n")

    (out / "attribute_groups.tsv").write_text(
        "# group_id<TAB>key\n"
        "faculty\tworkInstitution\nfaculty\twork_institution\n"
        "faculty\temployer\nfaculty\tworkplaces\n"
        "alumni\talumnus\nalumni\talumna\nalumni\talma_mater\n"
        "alumni\talmaMater\nalumni\teducation\nalumni\ttraining\n"
        "other_affiliations\tvisitorSchool\nother_affiliations\tvisitor_school\n"
        "other_affiliations\tpublisher\nother_affiliations\tcoachTeams\n"
        "other_affiliations\tcoach_teams\nother_affiliations\tcollege\n")

    ifs = ["journal,if5"]
    for j, _, w in JOURNALS:
        ifs.append(f"{j},{w * 10 + rng.uniform(-1, 1):.3f}")
    ifs.append(f"TPAMI,{rng.uniform(6, 8):.3f}")
    (out / "impact_factors.csv").write_text("\n".join(ifs) + "\n")

    (out / "north_america.txt").write_text(
        "# entities in the regional subset\n" +
        "".join(f"{u}\n" for u in unis[::3]))


if __name__ == "__main__":
    main()
