from django.contrib import admin
from api.models import Assignment, ReferenceSolution, Submission, SuiteCase

admin.site.register(Assignment)
admin.site.register(SuiteCase)
admin.site.register(ReferenceSolution)
admin.site.register(Submission)
