from django.urls import path
from .views import (
    AssignmentCreateListView, AssignmentRetrieveView, MappingView, SubmissionCreateListView, SubmissionRetrieveView,
)


urlpatterns = [
    path('assignments', AssignmentCreateListView.as_view(), name='create-list-assignment'),
    path('assignments/<int:assignment_id>', AssignmentRetrieveView.as_view(), name='retrieve-assignment'),
    path('assignments/<int:assignment_id>/submissions', SubmissionCreateListView.as_view(), name='create-list-submission'),
    path('submissions/<int:submission_id>', SubmissionRetrieveView.as_view(), name='retrieve-submission'),
    path('mappings', MappingView.as_view(), name='map-variables'),
]
