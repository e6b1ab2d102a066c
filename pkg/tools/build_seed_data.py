#!/usr/bin/env python3
"""Regenerate the packaged seed lexicon and paradigm template files.

The shipped data under src/posdkit/data/ is the output of this script;
edit the word lists or template structures here and re-run it rather than
hand-editing the JSONL.
"""

import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "src", "posdkit", "data")

SCHEMA = {
    "kind": "schema",
    "features": {
        "num": ["sg", "pl"],
        "pers": ["1", "2", "3"],
        "gen": ["masc", "fem", "neut"],
        "sem": ["human", "animal", "performance", "object"],
        "anim": ["yes", "no"],
        "bare": ["yes", "no"],
        "subcat": ["intrans", "trans", "pp_to"],
        "sel": ["human", "animal", "performance", "object"],
        "vform": ["base", "ing", "en"],
        "pol": ["npi", "free"],
        "def": ["def", "indef"],
        "auxtype": ["prog", "perf", "neg"],
    },
    "categories": ["N", "V", "Aux", "Neg", "Det", "NPI-Det", "Refl", "Rel", "P", "Punct"],
}

# (surface, gender-or-None) for singular gendered/ungendered humans.
HUMAN_SG_GENDERED = [
    ("boy", "masc"), ("girl", "fem"), ("man", "masc"), ("woman", "fem"),
    ("lady", "fem"), ("king", "masc"), ("queen", "fem"), ("prince", "masc"),
    ("princess", "fem"), ("duke", "masc"), ("duchess", "fem"), ("waiter", "masc"),
    ("waitress", "fem"), ("actor", "masc"), ("actress", "fem"), ("father", "masc"),
    ("mother", "fem"), ("brother", "masc"), ("sister", "fem"), ("uncle", "masc"),
    ("aunt", "fem"), ("monk", "masc"), ("nun", "fem"), ("bride", "fem"),
]
HUMAN_SG_PLAIN = [
    "critic", "teacher", "doctor", "lawyer", "poet", "singer",
    "dancer", "writer", "farmer", "judge", "pilot", "chef",
]
HUMAN_PL = [
    ("boys", "masc"), ("girls", "fem"), ("men", "masc"), ("women", "fem"),
    ("ladies", "fem"), ("kids", None), ("children", None), ("critics", None),
    ("teachers", None), ("doctors", None), ("lawyers", None), ("poets", None),
    ("singers", None), ("dancers", None), ("writers", None), ("farmers", None),
]
ANIMAL_SG = [
    "cat", "dog", "horse", "bird", "fox", "rabbit",
    "goat", "pig", "duck", "owl", "mouse", "wolf",
]
ANIMAL_PL = [
    "cats", "dogs", "horses", "birds", "foxes", "rabbits",
    "goats", "pigs", "ducks", "owls", "mice", "wolves",
]
PERFORMANCE_PL = [
    "arias", "songs", "poems", "ballads", "operas",
    "anthems", "hymns", "sonnets", "melodies", "tunes",
]

# (base, past, pres_3sg, ing, en); pres_pl is the base form throughout.
V_INTRANS = [
    ("go", "went", "goes", "going", "gone"),
    ("sleep", "slept", "sleeps", "sleeping", "slept"),
    ("run", "ran", "runs", "running", "run"),
    ("swim", "swam", "swims", "swimming", "swum"),
    ("dance", "danced", "dances", "dancing", "danced"),
    ("smile", "smiled", "smiles", "smiling", "smiled"),
    ("laugh", "laughed", "laughs", "laughing", "laughed"),
    ("jump", "jumped", "jumps", "jumping", "jumped"),
    ("walk", "walked", "walks", "walking", "walked"),
    ("sit", "sat", "sits", "sitting", "sat"),
]
V_TRANS_ANIMAL = [
    ("see", "saw", "sees", "seeing", "seen"),
    ("chase", "chased", "chases", "chasing", "chased"),
    ("feed", "fed", "feeds", "feeding", "fed"),
    ("find", "found", "finds", "finding", "found"),
    ("adopt", "adopted", "adopts", "adopting", "adopted"),
    ("watch", "watched", "watches", "watching", "watched"),
    ("follow", "followed", "follows", "following", "followed"),
    ("fetch", "fetched", "fetches", "fetching", "fetched"),
    ("get", "got", "gets", "getting", "gotten"),
    ("want", "wanted", "wants", "wanting", "wanted"),
]
V_TRANS_HUMAN = [
    ("love", "loved", "loves", "loving", "loved"),
    ("praise", "praised", "praises", "praising", "praised"),
    ("admire", "admired", "admires", "admiring", "admired"),
    ("hate", "hated", "hates", "hating", "hated"),
    ("know", "knew", "knows", "knowing", "known"),
    ("meet", "met", "meets", "meeting", "met"),
    ("trust", "trusted", "trusts", "trusting", "trusted"),
    ("respect", "respected", "respects", "respecting", "respected"),
    ("teach", "taught", "teaches", "teaching", "taught"),
    ("greet", "greeted", "greets", "greeting", "greeted"),
]
V_TRANS_PERFORMANCE = [
    ("sing", "sang", "sings", "singing", "sung"),
    ("write", "wrote", "writes", "writing", "written"),
    ("recite", "recited", "recites", "reciting", "recited"),
    ("perform", "performed", "performs", "performing", "performed"),
    ("compose", "composed", "composes", "composing", "composed"),
    ("hum", "hummed", "hums", "humming", "hummed"),
]
V_PP_TO = [
    ("talk", "talked", "talks", "talking", "talked"),
    ("speak", "spoke", "speaks", "speaking", "spoken"),
    ("listen", "listened", "listens", "listening", "listened"),
    ("wave", "waved", "waves", "waving", "waved"),
    ("bow", "bowed", "bows", "bowing", "bowed"),
    ("nod", "nodded", "nods", "nodding", "nodded"),
]


def noun(surface, num, sem, anim, gen=None):
    features = {"num": num, "pers": "3", "sem": sem, "anim": anim,
                "bare": "yes" if num == "pl" else "no"}
    if gen:
        features["gen"] = gen
    return {"kind": "entry", "id": surface, "category": "N",
            "forms": {"base": surface}, "features": features}


def verb(base, past, pres_3sg, ing, en, subcat, sel=None):
    features = {"subcat": subcat}
    if sel:
        features["sel"] = sel
    return {"kind": "entry", "id": base, "category": "V",
            "forms": {"base": base, "past": past, "pres_3sg": pres_3sg,
                      "pres_pl": base, "ing": ing, "en": en},
            "features": features}


def simple(entry_id, category, surface=None, **features):
    return {"kind": "entry", "id": entry_id, "category": category,
            "forms": {"base": surface or entry_id}, "features": features}


def build_lexicon():
    records = [SCHEMA]
    for surface, gen in HUMAN_SG_GENDERED:
        records.append(noun(surface, "sg", "human", "yes", gen))
    for surface in HUMAN_SG_PLAIN:
        records.append(noun(surface, "sg", "human", "yes"))
    for surface, gen in HUMAN_PL:
        records.append(noun(surface, "pl", "human", "yes", gen))
    for surface in ANIMAL_SG:
        records.append(noun(surface, "sg", "animal", "yes", "neut"))
    for surface in ANIMAL_PL:
        records.append(noun(surface, "pl", "animal", "yes", "neut"))
    for surface in PERFORMANCE_PL:
        records.append(noun(surface, "pl", "performance", "no"))
    for row in V_INTRANS:
        records.append(verb(*row, subcat="intrans"))
    for row in V_TRANS_ANIMAL:
        records.append(verb(*row, subcat="trans", sel="animal"))
    for row in V_TRANS_HUMAN:
        records.append(verb(*row, subcat="trans", sel="human"))
    for row in V_TRANS_PERFORMANCE:
        records.append(verb(*row, subcat="trans", sel="performance"))
    for row in V_PP_TO:
        records.append(verb(*row, subcat="pp_to", sel="human"))
    records += [
        simple("is", "Aux", num="sg", vform="ing", auxtype="prog"),
        simple("are", "Aux", num="pl", vform="ing", auxtype="prog"),
        simple("has", "Aux", num="sg", vform="en", auxtype="perf"),
        simple("have", "Aux", num="pl", vform="en", auxtype="perf"),
        simple("won't", "Neg", vform="base", auxtype="neg"),
        simple("can't", "Neg", vform="base", auxtype="neg"),
        simple("wouldn't", "Neg", vform="base", auxtype="neg"),
        simple("shouldn't", "Neg", vform="base", auxtype="neg"),
        simple("couldn't", "Neg", vform="base", auxtype="neg"),
        simple("don't", "Neg", num="pl", vform="base", auxtype="neg"),
        simple("doesn't", "Neg", num="sg", vform="base", auxtype="neg"),
        simple("the", "Det", pol="free", **{"def": "def"}),
        simple("a", "Det", num="sg", pol="free", **{"def": "indef"}),
        simple("any", "NPI-Det", pol="npi"),
        simple("himself", "Refl", num="sg", pers="3", gen="masc", sem="human"),
        simple("herself", "Refl", num="sg", pers="3", gen="fem", sem="human"),
        simple("itself", "Refl", num="sg", pers="3", gen="neut", sem="animal"),
        simple("themselves", "Refl", num="pl", pers="3"),
        simple("who", "Rel"),
        simple("that", "Rel"),
        simple("to", "P"),
        simple(".", "Punct"),
        simple("?", "Punct"),
    ]
    return records


# ---------------------------------------------------------------------------
# Templates. Shorthand builders keep the productions readable.


def nt(name, role=None, constraints=None):
    out = {"nt": name}
    if role:
        out["role"] = role
    if constraints:
        out["constraints"] = constraints
    return out


def slot(cat, constraints=None, form=None, share=None, role=None, lexeme=None):
    out = {"cat": cat}
    if constraints:
        out["constraints"] = constraints
    if form:
        out["form"] = form
    if share:
        out["share"] = share
    if role:
        out["role"] = role
    if lexeme:
        out["lexeme"] = lexeme
    return out


def rule(lhs, children, links=()):
    return {"lhs": lhs, "children": children, "links": [list(l) for l in links]}


def template(tid, root, rules):
    return {"kind": "template", "id": tid, "root": root, "rules": rules}


NP_PULL = [("num", 1, "num"), ("pers", 1, "pers"), ("gen", 1, "gen"), ("sem", 1, "sem")]


def saux_templates():
    vp_main = rule(
        "VP_M",
        [
            slot("Aux", share="aux_main", role="main-aux"),
            slot("V", {"subcat": "trans", "sel": "animal"}, form="from:vform",
                 share="v_main", role="main-verb"),
            nt("NP_O", role="object"),
        ],
        [("num", 0, "num"), ("vform", 0, "vform"), ("vform", 1, "vform"),
         ("sel", 1, "sel"), ("num", 2, "num"), ("sel", 2, "sem")],
    )
    vp_emb = [
        slot("Aux", share="aux_emb", role="embedded-aux"),
        slot("V", {"subcat": "intrans"}, form="from:vform",
             share="v_emb", role="embedded-verb"),
    ]
    vp_emb_links = [("num", 0, "num"), ("vform", 0, "vform"), ("vform", 1, "vform")]
    np_o = rule(
        "NP_O",
        [slot("Det", share="det_obj"), slot("N", share="n_obj")],
        [("num", 0, "num")] + NP_PULL,
    )

    train = template("saux_train_decl", "S", [
        rule("S",
             [nt("NP_S", role="subject"), nt("VP_M"), slot("Punct", lexeme=".")],
             [("num", 0, "num"), ("pers", 0, "pers"), ("num", 1, "num")]),
        rule("NP_S",
             [slot("Det", share="det_subj"),
              slot("N", {"anim": "yes"}, share="n_subj"),
              nt("RC")],
             [("num", 0, "num")] + NP_PULL + [("num", 2, "num")]),
        rule("RC",
             [slot("Rel", share="rel", role="relativizer"), nt("VP_E")],
             [("num", 1, "num")]),
        rule("VP_E", vp_emb, vp_emb_links),
        vp_main,
        np_o,
    ])

    test = template("saux_test_decl", "S", [
        rule("S",
             [nt("NP_S", role="subject"), nt("VP_M"), slot("Punct", lexeme=".")],
             [("num", 0, "num"), ("pers", 0, "pers"), ("num", 1, "num")]),
        rule("NP_S",
             [slot("Det", share="det_subj"),
              slot("N", {"anim": "yes"}, share="n_subj")],
             [("num", 0, "num")] + NP_PULL),
        rule("VP_M",
             [
                 slot("Aux", share="aux_main", role="main-aux"),
                 slot("V", {"subcat": "trans", "sel": "animal"}, form="from:vform",
                      share="v_main", role="main-verb"),
                 nt("NP_OR", role="object"),
             ],
             [("num", 0, "num"), ("vform", 0, "vform"), ("vform", 1, "vform"),
              ("sel", 1, "sel"), ("num", 2, "num"), ("sel", 2, "sem")]),
        rule("NP_OR",
             [slot("Det", share="det_obj"), slot("N", share="n_obj"), nt("RC")],
             [("num", 0, "num")] + NP_PULL + [("num", 2, "num")]),
        rule("RC",
             [slot("Rel", share="rel", role="relativizer"), nt("VP_E")],
             [("num", 1, "num")]),
        rule("VP_E", vp_emb, vp_emb_links),
        np_o,
    ])

    control = template("saux_control_decl", "S", [
        rule("S",
             [nt("NP_S", role="subject"), nt("VP_M"), slot("Punct", lexeme=".")],
             [("num", 0, "num"), ("pers", 0, "pers"), ("num", 1, "num")]),
        rule("NP_S",
             [slot("Det", share="det_subj"),
              slot("N", {"anim": "yes"}, share="n_subj"),
              nt("RC")],
             [("num", 0, "num")] + NP_PULL),
        rule("RC",
             [slot("Rel", share="rel", role="relativizer"), nt("VP_F")]),
        rule("VP_F",
             [slot("V", {"subcat": "intrans"}, form="past",
                   share="v_emb", role="embedded-verb")]),
        vp_main,
        np_o,
    ])

    return [train, test, control]


def reflexive_templates():
    s_links = [("num", 0, "num"), ("pers", 0, "pers"), ("gen", 0, "gen"),
               ("num", 1, "num"), ("pers", 1, "pers"), ("gen", 1, "gen")]
    np_s = lambda rc: rule(
        "NP_S",
        [slot("Det", share="det_subj"),
         slot("N", {"sem": "human", "num": "sg"}, share="n_subj", role="binder"),
         nt(rc)],
        [("num", 0, "num")] + NP_PULL
        + [("num", 2, "num"), ("pers", 2, "pers"), ("gen", 2, "gen")],
    )
    np_bare = rule(
        "NP_B",
        [slot("N", {"bare": "yes", "num": "pl"}, share="n_obj")],
        [("sem", 0, "sem"), ("num", 0, "num"), ("pers", 0, "pers"), ("gen", 0, "gen")],
    )

    train_pos = template("refl_train_pos", "S", [
        rule("S", [nt("NP_S", role="subject"), nt("VP_T"), slot("Punct", lexeme=".")],
             s_links),
        np_s("RC"),
        rule("RC",
             [slot("Rel", share="rel", role="relativizer"), nt("VP_R")],
             [("num", 1, "num"), ("pers", 1, "pers"), ("gen", 1, "gen")]),
        rule("VP_R",
             [slot("V", {"subcat": "trans", "sel": "human"}, form="pres", share="v_rc"),
              slot("Refl", share="refl_match", role="reflexive")],
             [("num", 0, "num"), ("sel", 0, "sel"), ("sel", 1, "sem"),
              ("num", 1, "num"), ("pers", 1, "pers"), ("gen", 1, "gen")]),
        rule("VP_T",
             [slot("V", {"subcat": "pp_to"}, form="pres", share="v_main",
                   role="main-verb"),
              nt("PP")],
             [("num", 0, "num"), ("sel", 0, "sel"), ("sel", 1, "sem")]),
        rule("PP", [slot("P", lexeme="to"), nt("NP_B")], [("sem", 1, "sem")]),
        np_bare,
    ])

    train_neg = template("refl_train_neg", "S", [
        rule("S", [nt("NP_S", role="subject"), nt("VP_T"), slot("Punct", lexeme=".")],
             s_links),
        np_s("RC"),
        rule("RC",
             [slot("Rel", share="rel", role="relativizer"), nt("VP_R")],
             [("num", 1, "num")]),
        rule("VP_R",
             [slot("V", {"subcat": "trans", "sel": "human"}, form="pres", share="v_rc"),
              slot("Refl", {"num": "pl", "pers": "3"}, share="refl_mismatch",
                   role="reflexive")],
             [("num", 0, "num"), ("sel", 0, "sel"), ("sel", 1, "sem")]),
        rule("VP_T",
             [slot("V", {"subcat": "pp_to"}, form="pres", share="v_main",
                   role="main-verb"),
              nt("PP")],
             [("num", 0, "num"), ("sel", 0, "sel"), ("sel", 1, "sem")]),
        rule("PP", [slot("P", lexeme="to"), nt("NP_B")], [("sem", 1, "sem")]),
        np_bare,
    ])

    test_pos = template("refl_test_pos", "S", [
        rule("S", [nt("NP_S", role="subject"), nt("VP_T"), slot("Punct", lexeme=".")],
             s_links),
        np_s("RC"),
        rule("RC",
             [slot("Rel", share="rel", role="relativizer"), nt("VP_R")],
             [("num", 1, "num")]),
        rule("VP_R",
             [slot("V", {"subcat": "trans", "sel": "human"}, form="pres", share="v_rc"),
              nt("NP_B")],
             [("num", 0, "num"), ("sel", 0, "sel"), ("sel", 1, "sem")]),
        rule("VP_T",
             [slot("V", {"subcat": "pp_to"}, form="pres", share="v_main",
                   role="main-verb"),
              nt("PP")],
             [("num", 0, "num"), ("sel", 0, "sel"), ("sel", 1, "sem"),
              ("num", 1, "num"), ("pers", 1, "pers"), ("gen", 1, "gen")]),
        rule("PP",
             [slot("P", lexeme="to"),
              slot("Refl", share="refl_match", role="reflexive")],
             [("sem", 1, "sem"), ("num", 1, "num"), ("pers", 1, "pers"),
              ("gen", 1, "gen")]),
        np_bare,
    ])

    test_neg = template("refl_test_neg", "S", [
        rule("S", [nt("NP_S", role="subject"), nt("VP_T"), slot("Punct", lexeme=".")],
             s_links),
        np_s("RC"),
        rule("RC",
             [slot("Rel", share="rel", role="relativizer"), nt("VP_R")],
             [("num", 1, "num")]),
        rule("VP_R",
             [slot("V", {"subcat": "trans", "sel": "human"}, form="pres", share="v_rc"),
              nt("NP_B")],
             [("num", 0, "num"), ("sel", 0, "sel"), ("sel", 1, "sem")]),
        rule("VP_T",
             [slot("V", {"subcat": "pp_to"}, form="pres", share="v_main",
                   role="main-verb"),
              nt("PP")],
             [("num", 0, "num"), ("sel", 0, "sel"), ("sel", 1, "sem")]),
        rule("PP",
             [slot("P", lexeme="to"),
              slot("Refl", {"num": "pl", "pers": "3"}, share="refl_mismatch",
                   role="reflexive")],
             [("sem", 1, "sem")]),
        np_bare,
    ])

    return [train_pos, train_neg, test_pos, test_neg]


def npi_templates():
    s_links = [("num", 0, "num"), ("pers", 0, "pers"), ("num", 1, "num")]
    np_s = lambda rc: rule(
        "NP_S",
        [slot("N", {"sem": "human", "bare": "yes", "num": "pl"}, share="n_subj"),
         nt(rc)],
        [("num", 0, "num"), ("pers", 0, "pers"), ("sem", 0, "sem"), ("num", 1, "num")],
    )
    det_np = lambda name, noun_share: rule(
        name,
        [slot("Det", {"pol": "free"}, share="det_free"),
         slot("N", share=noun_share)],
        [("num", 0, "num")] + NP_PULL,
    )
    any_np = lambda name, noun_share: rule(
        name,
        [slot("NPI-Det", lexeme="any", role="npi"), slot("N", share=noun_share)],
        NP_PULL,
    )

    train_main = lambda obj: rule(
        "VP_N",
        [slot("Neg", share="neg", role="negation"),
         slot("V", {"subcat": "trans"}, form="from:vform", share="v_main",
              role="main-verb"),
         nt(obj, constraints={"num": "pl"})],
        [("num", 0, "num"), ("vform", 0, "vform"), ("vform", 1, "vform"),
         ("sel", 1, "sel"), ("sel", 2, "sem")],
    )
    train_rc_vp = lambda obj: rule(
        "VP_RP",
        [slot("V", {"subcat": "trans"}, form="past", share="v_rc"),
         nt(obj, constraints={"num": "pl"})],
        [("sel", 0, "sel"), ("sel", 1, "sem")],
    )

    train_pos = template("npi_train_pos", "S", [
        rule("S", [nt("NP_S", role="subject"), nt("VP_N"), slot("Punct", lexeme=".")],
             s_links),
        np_s("RC"),
        rule("RC", [slot("Rel", share="rel", role="relativizer"), nt("VP_RP")]),
        train_rc_vp("NP_D"),
        det_np("NP_D", "n_rc_obj"),
        train_main("NP_Q"),
        any_np("NP_Q", "n_main_obj"),
    ])

    train_neg = template("npi_train_neg", "S", [
        rule("S", [nt("NP_S", role="subject"), nt("VP_N"), slot("Punct", lexeme=".")],
             s_links),
        np_s("RC"),
        rule("RC", [slot("Rel", share="rel", role="relativizer"), nt("VP_RP")]),
        train_rc_vp("NP_Q"),
        any_np("NP_Q", "n_rc_obj"),
        train_main("NP_D"),
        det_np("NP_D", "n_main_obj"),
    ])

    test_rc_vp = lambda obj: rule(
        "VP_RN",
        [slot("Neg", share="neg", role="negation"),
         slot("V", {"subcat": "trans"}, form="from:vform", share="v_rc"),
         nt(obj, constraints={"num": "pl"})],
        [("num", 0, "num"), ("vform", 0, "vform"), ("vform", 1, "vform"),
         ("sel", 1, "sel"), ("sel", 2, "sem")],
    )
    test_main = lambda obj: rule(
        "VP_P",
        [slot("V", {"subcat": "trans"}, form="pres", share="v_main",
              role="main-verb"),
         nt(obj, constraints={"num": "pl"})],
        [("num", 0, "num"), ("sel", 0, "sel"), ("sel", 1, "sem")],
    )

    test_pos = template("npi_test_pos", "S", [
        rule("S", [nt("NP_S", role="subject"), nt("VP_P"), slot("Punct", lexeme=".")],
             s_links),
        np_s("RC"),
        rule("RC", [slot("Rel", share="rel", role="relativizer"), nt("VP_RN")],
             [("num", 1, "num")]),
        test_rc_vp("NP_Q"),
        any_np("NP_Q", "n_rc_obj"),
        test_main("NP_D"),
        det_np("NP_D", "n_main_obj"),
    ])

    test_neg = template("npi_test_neg", "S", [
        rule("S", [nt("NP_S", role="subject"), nt("VP_P"), slot("Punct", lexeme=".")],
             s_links),
        np_s("RC"),
        rule("RC", [slot("Rel", share="rel", role="relativizer"), nt("VP_RN")],
             [("num", 1, "num")]),
        test_rc_vp("NP_D"),
        det_np("NP_D", "n_rc_obj"),
        test_main("NP_Q"),
        any_np("NP_Q", "n_main_obj"),
    ])

    return [train_pos, train_neg, test_pos, test_neg]


def tense_templates():
    s_links = [("num", 0, "num"), ("pers", 0, "pers")]
    np_s_rc = rule(
        "NP_S",
        [slot("Det", share="det_subj"),
         slot("N", {"sem": "human"}, share="n_subj"),
         nt("RC")],
        [("num", 0, "num")] + NP_PULL + [("num", 2, "num")],
    )
    np_s_plain = rule(
        "NP_S",
        [slot("Det", share="det_subj"), slot("N", {"sem": "human"}, share="n_subj")],
        [("num", 0, "num")] + NP_PULL,
    )
    np_perf = rule(
        "NP_PF",
        [slot("N", {"bare": "yes"}, share="n_emb_obj")],
        [("sem", 0, "sem"), ("num", 0, "num"), ("pers", 0, "pers")],
    )
    np_obj = lambda extra=(): rule(
        "NP_O",
        [slot("Det", share="det_obj"), slot("N", share="n_main_obj")] + list(extra),
        [("num", 0, "num")] + NP_PULL + ([("num", 2, "num")] if extra else []),
    )
    vp_emb = lambda form: rule(
        "VP_EP",
        [slot("V", {"subcat": "trans", "sel": "performance"}, form=form,
              share="v_emb", role="embedded-verb"),
         nt("NP_PF")],
        [("num", 0, "num"), ("sel", 0, "sel"), ("sel", 1, "sem")],
    )
    rc = rule("RC", [slot("Rel", share="rel", role="relativizer"), nt("VP_EP")],
              [("num", 1, "num")])
    vp_main = lambda obj_extra=(): rule(
        "VP_MP",
        [slot("V", {"subcat": "trans", "sel": "human"}, form="past",
              share="v_main", role="main-verb"),
         nt("NP_O", role="object")],
        [("sel", 0, "sel"), ("sel", 1, "sem")],
    )

    def train(tid, form):
        return template(tid, "S", [
            rule("S", [nt("NP_S", role="subject"), nt("VP_MP"),
                       slot("Punct", lexeme=".")], s_links),
            np_s_rc,
            rc,
            vp_emb(form),
            np_perf,
            vp_main(),
            np_obj(),
        ])

    def test(tid, form):
        return template(tid, "S", [
            rule("S", [nt("NP_S", role="subject"), nt("VP_MP"),
                       slot("Punct", lexeme=".")], s_links),
            np_s_plain,
            vp_main(),
            np_obj(extra=[nt("RC")]),
            rc,
            vp_emb(form),
            np_perf,
        ])

    return [
        train("tense_train_past", "past"),
        train("tense_train_pres", "pres"),
        test("tense_test_past", "past"),
        test("tense_test_pres", "pres"),
    ]


def dump(path, records):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"wrote {path} ({len(records)} records)")


def main():
    dump(os.path.join(DATA, "lexicon.jsonl"), build_lexicon())
    dump(os.path.join(DATA, "templates", "saux_inv.jsonl"), saux_templates())
    dump(os.path.join(DATA, "templates", "reflexive.jsonl"), reflexive_templates())
    dump(os.path.join(DATA, "templates", "npi.jsonl"), npi_templates())
    dump(os.path.join(DATA, "templates", "tense.jsonl"), tense_templates())


if __name__ == "__main__":
    main()
