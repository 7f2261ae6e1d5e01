# Turn the analysis into tutorial text.
from atdelfi import analyze, build_graph, load_game, render_doc

doc = render_doc(analyze(build_graph(load_game("aliens"))))
print(doc.to_text())

# lines keep the mechanic they came from
for section, lines in doc.sections():
    for line in lines:
        print(section, line.mechanic, line.text[:50])
