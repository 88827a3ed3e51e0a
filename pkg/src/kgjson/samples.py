"""The Statue of Liberty graph and its three example queries."""

from .ntriples import parse_ntriples
from .query import parse_query

STATUE_OF_LIBERTY_NT = """\
<StatueOfLiberty> <located_in> <NewYork> .
<StatueOfLiberty> <located_in> "The US" .
<StatueOfLiberty> <instance_of> "Statue" .
<NewYork> <instance_of> "city" .
<NewYork> <located_in> <UnitedStates> .
<NewYork> <instance_of> "metropolis" .
<UnitedStates> <known_as> "The US" .
<UnitedStates> <biggest_city_is> <NewYork> .
"""

# The type lookup, the subject-subject join, and the subject-object join.
# Constants follow the graph's spelling ("Statue", UnitedStates); matching is exact.
TYPE_QUERY = """\
SELECT ?Ins
WHERE {
  StatueOfLiberty instance_of ?Ins .
}
"""

SS_QUERY = """\
SELECT ?x
WHERE {
  ?x located_in "The US" .
  ?x instance_of "Statue" .
}
"""

SO_QUERY = """\
SELECT ?y
WHERE {
  ?x located_in UnitedStates .
  ?y located_in ?x .
}
"""


def statue_of_liberty():
    return parse_ntriples(STATUE_OF_LIBERTY_NT)


def statue_queries():
    return {"type": parse_query(TYPE_QUERY), "ss": parse_query(SS_QUERY),
            "so": parse_query(SO_QUERY)}
