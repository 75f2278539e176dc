"""Creativity metric: fraction of generated verses copied from training data.

Run:  python demos/04_creativity_metric.py
"""

from lucbat import build_verse_index, corpus_from_text, creativity_score

TRAINING = """\
Trăm năm trong cõi người ta
Chữ tài chữ mệnh khéo là ghét nhau

Trải qua một cuộc bể dâu
Những điều trông thấy mà đau đớn lòng
"""

GENERATED = """\
Trăm năm trong cõi người ta
Một câu thơ mới chưa hề thấy đâu

Trải qua một cuộc bể dâu
Những điều trông thấy mà đau đớn lòng

Câu nào cũng mới tinh khôi
Không sao tìm thấy trong kho bao giờ
"""

index = build_verse_index(corpus_from_text(TRAINING, source="train"))
print(f"verse index holds {index.size} distinct normalized verses")

generated = corpus_from_text(GENERATED, source="gen")
report = creativity_score(generated, index)
for novelty in report.per_poem:
    print(f"  {novelty.poem_id}: {novelty.copied_verses}/{novelty.total_verses} "
          f"copied (ratio {novelty.copied_ratio:.2f})")
print(f"creativity C = {report.score:.4f}")
print()
print("Matching is form-, case- and punctuation-blind:")
print("  'TRĂM năm, trong cõi người ta!' in index:",
      "TRĂM năm, trong cõi người ta!" in index)
