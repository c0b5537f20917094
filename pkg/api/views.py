import logging

from django.shortcuts import get_object_or_404
from rest_framework import generics, status
from rest_framework.response import Response
from rest_framework.views import APIView

from nn.checkpoint import CheckpointError

from .models import Assignment, Submission
from .serializers import AssignmentSerializer, MappingRequestSerializer, SubmissionSerializer
from .services import MappingService, RepairService

logger = logging.getLogger(__name__)


class AssignmentCreateListView(generics.ListCreateAPIView):
    """
    API to create assignments (with their test cases and references) or list them all.
    """
    queryset = Assignment.objects.prefetch_related('cases', 'references')
    serializer_class = AssignmentSerializer

    def create(self, request, *args, **kwargs):
        # If request data is a list, handle bulk creation
        if isinstance(request.data, list):
            serializer = self.get_serializer(data=request.data, many=True)
        else:
            serializer = self.get_serializer(data=request.data)

        if serializer.is_valid():
            serializer.save()
            return Response(serializer.data, status=status.HTTP_201_CREATED)
        return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)


class AssignmentRetrieveView(generics.RetrieveAPIView):
    queryset = Assignment.objects.prefetch_related('cases', 'references')
    serializer_class = AssignmentSerializer
    lookup_url_kwarg = 'assignment_id'


class SubmissionCreateListView(generics.ListCreateAPIView):
    """
    API to list an assignment's submissions or submit a program: it is parsed, tested, and
    repaired when a test fails.
    """
    serializer_class = SubmissionSerializer

    def get_queryset(self):
        return Submission.objects.filter(assignment_id=self.kwargs['assignment_id'])

    def create(self, request, *args, **kwargs):
        assignment = get_object_or_404(Assignment, id=self.kwargs['assignment_id'])
        source = request.data.get("source")
        if not source:
            return Response({"error": "source is required"}, status=status.HTTP_400_BAD_REQUEST)

        try:
            submission = Submission.objects.create(assignment=assignment, source=source)
            RepairService.process(submission)
            return Response(SubmissionSerializer(submission).data, status=status.HTTP_201_CREATED)
        except Exception as e:
            logger.exception("processing a submission for %s failed", assignment.slug)
            return Response({"error": str(e)}, status=status.HTTP_500_INTERNAL_SERVER_ERROR)


class SubmissionRetrieveView(generics.RetrieveAPIView):
    queryset = Submission.objects.all()
    serializer_class = SubmissionSerializer
    lookup_url_kwarg = 'submission_id'


class MappingView(APIView):
    """
    API to map the variables of a buggy program onto those of a correct one.
    """

    def post(self, request):
        serializer = MappingRequestSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)

        try:
            result = MappingService.map_sources(
                serializer.validated_data['buggy_source'], serializer.validated_data['correct_source'],
            )
            return Response(result)
        except CheckpointError as e:
            return Response({"error": str(e)}, status=status.HTTP_503_SERVICE_UNAVAILABLE)
        except Exception as e:
            logger.exception("mapping failed")
            return Response({"error": str(e)}, status=status.HTTP_500_INTERNAL_SERVER_ERROR)
