from rest_framework import serializers

from lang.exceptions import LangError
from lang.parser import parse

from .models import Assignment, ReferenceSolution, Submission, SuiteCase


def parsed(source):
    """Parse and resolve a program, turning language errors into validation errors."""
    try:
        return parse(source)
    except LangError as e:
        raise serializers.ValidationError(str(e))


class SuiteCaseSerializer(serializers.ModelSerializer):
    stdin = serializers.CharField(allow_blank=True, trim_whitespace=False)
    expected_stdout = serializers.CharField(allow_blank=True, trim_whitespace=False)

    class Meta:
        model = SuiteCase
        fields = ['position', 'stdin', 'expected_stdout']


class ReferenceSolutionSerializer(serializers.ModelSerializer):
    source = serializers.CharField(trim_whitespace=False)

    def validate_source(self, value):
        parsed(value)
        return value

    class Meta:
        model = ReferenceSolution
        fields = ['id', 'label', 'source']


# Nested cases and references are created together with the assignment
class AssignmentSerializer(serializers.ModelSerializer):
    cases = SuiteCaseSerializer(many=True)
    references = ReferenceSolutionSerializer(many=True)

    class Meta:
        model = Assignment
        fields = ['id', 'slug', 'title', 'description', 'cases', 'references']

    def validate_cases(self, value):
        if not value:
            raise serializers.ValidationError("an assignment needs at least one test case")
        positions = [case['position'] for case in value]
        if len(set(positions)) != len(positions):
            raise serializers.ValidationError("case positions must be unique")
        return value

    def validate_references(self, value):
        if not value:
            raise serializers.ValidationError("an assignment needs at least one reference solution")
        labels = [reference['label'] for reference in value]
        if len(set(labels)) != len(labels):
            raise serializers.ValidationError("reference labels must be unique")
        return value

    def create(self, validated_data):
        cases = validated_data.pop('cases')
        references = validated_data.pop('references')
        assignment = Assignment.objects.create(**validated_data)
        SuiteCase.objects.bulk_create(SuiteCase(assignment=assignment, **case) for case in cases)
        ReferenceSolution.objects.bulk_create(
            ReferenceSolution(assignment=assignment, **reference) for reference in references
        )
        return assignment


class SubmissionSerializer(serializers.ModelSerializer):
    assignment = serializers.SlugRelatedField(slug_field='slug', read_only=True)
    reference = serializers.StringRelatedField()

    class Meta:
        model = Submission
        fields = [
            'id',
            'assignment',
            'source',
            'status',
            'message',
            'tests_passed',
            'tests_total',
            'repaired_source',
            'reference',
            'mapping',
            'mappings_tried',
            'candidates_tried',
            'elapsed',
            'created_at',
        ]
        read_only_fields = [field for field in fields if field != 'source']


class MappingRequestSerializer(serializers.Serializer):
    buggy_source = serializers.CharField(trim_whitespace=False)
    correct_source = serializers.CharField(trim_whitespace=False)

    def validate_buggy_source(self, value):
        parsed(value)
        return value

    def validate_correct_source(self, value):
        parsed(value)
        return value
