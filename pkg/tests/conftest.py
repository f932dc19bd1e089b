import pytest

from kgforge.graph import Node, PropertyGraph

MIRNA_CURIE = "RNAcentral:URS00005F5B9E_9606"
MIRNA_URI = "https://rnacentral.org/rna/URS00005F5B9E_9606"
MIRNA_SEQUENCE = "CUGCAAUGUAAGCACUUCUUAC"
LNCRNA_CURIE = "RNAcentral:URS00000537B8_9606"


def build_fixture_graph() -> PropertyGraph:
    """Small graph shaped like the portal's running example."""
    g = PropertyGraph()
    mirna = g.add_node(Node(
        MIRNA_CURIE,
        MIRNA_URI,
        {"RNA", "sncRNA", "Small_regulatory_ncRNA", "ncRNA", "miRNA"},
        {
            "Label": ["hsa-miR-106a-3p"],
            "Description": ["homo sapiens (human) hsa-mir-106a-3p"],
            "Genomic_coordinates": ["chrX:134170208-134170229-"],
            "Sequence": [MIRNA_SEQUENCE],
            "Species": ["Homo sapiens"],
            "Synonym": ["mir-106a-3p", "MIR106A-3p"],
        },
    ))
    lncrna = g.add_node(Node(
        LNCRNA_CURIE,
        "https://rnacentral.org/rna/URS00000537B8_9606",
        {"RNA", "ncRNA", "lncRNA"},
        {"Label": ["MALAT1-like"], "Sequence": ["ACGUACGUAC"]},
    ))
    let7 = g.add_node(Node(
        "RNAcentral:URS0000012345_9606",
        "https://rnacentral.org/rna/URS0000012345_9606",
        {"RNA", "ncRNA", "miRNA"},
        {"Label": ["hsa-let-7a-5p"], "Sequence": ["UGAGGUAGUAGGUUGUAUAGUU"]},
    ))
    gene = g.add_node(Node(
        "Entrez:1954",
        "https://www.ncbi.nlm.nih.gov/gene/1954",
        {"Gene"},
        {"Label": ["MAPK8IP1"]},
    ))
    cdc34 = g.add_node(Node(
        "Entrez:997",
        "https://www.ncbi.nlm.nih.gov/gene/997",
        {"Gene"},
        {"Label": ["CDC34"]},
    ))
    disease = g.add_node(Node(
        "MONDO:0020683",
        "http://purl.obolibrary.org/obo/MONDO_0020683",
        {"Disease"},
        {"Label": ["acute respiratory distress syndrome"]},
    ))
    g.add_edge(mirna, gene, "regulates_activity_of", {
        "Method": ["western blotting"],
        "PubMedID": ["25531890"],
        "Source": ["TarBase"],
    })
    g.add_edge(let7, cdc34, "regulates_activity_of", {
        "Method": ["luciferase reporter assay"],
        "PubMedID": ["18328430"],
        "Source": ["miRTarBase"],
    })
    g.add_edge(gene, disease, "causes_or_contributes_to_condition", {
        "PubMedID": ["25531890", "30000000"],
        "Source": ["DisGeNET"],
    })
    g.add_edge(lncrna, mirna, "interacts_with", {
        "Source": ["LncRNAWiki"],
        "Context": ["hela cell"],
        "Method": ["cross-linking and immunoprecipitation"],
        "PubMedID": ["25531890"],
    })
    g.add_edge(cdc34, disease, "develops_from", {"Source": ["fixture"]})
    return g


@pytest.fixture
def fixture_graph():
    return build_fixture_graph().freeze()


@pytest.fixture
def mutable_graph():
    return build_fixture_graph()
